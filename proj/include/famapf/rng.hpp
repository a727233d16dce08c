#pragma once

#include <cstdint>
#include <random>

namespace famapf {

// std::uniform_*_distribution is implementation-defined, so everything that must
// reproduce across toolchains draws through these helpers on top of mt19937_64,
// whose output sequence the standard pins down.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed, stream)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  int below(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

  // Index drawn proportionally to non-negative weights; returns -1 if all are zero.
  template <class Range>
  int weighted(const Range& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) return -1;
    double r = uniform() * total;
    int i = 0;
    int last_positive = -1;
    for (double w : weights) {
      if (w > 0.0) {
        last_positive = i;
        if (r < w) return i;
        r -= w;
      }
      ++i;
    }
    return last_positive;
  }

  // splitmix64 finalizer; derives independent seeds for sub-streams (per cell, per run).
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace famapf
