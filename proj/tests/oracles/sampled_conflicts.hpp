#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "famapf/uasim.hpp"

namespace oracle {

// Position of a piecewise-linear track at time t (within its support).
inline famapf::Point track_at(const famapf::Track& tr, double t) {
  const auto& s = tr.samples;
  if (t <= s.front().t) return {s.front().x, s.front().y};
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (t <= s[i].t) {
      const double f = (t - s[i - 1].t) / (s[i].t - s[i - 1].t);
      return {s[i - 1].x + f * (s[i].x - s[i - 1].x), s[i - 1].y + f * (s[i].y - s[i - 1].y)};
    }
  }
  return {s.back().x, s.back().y};
}

// Start times of contact episodes found by sampling both tracks `per_step` times per second
// over their common support; an episode is a maximal run of samples closer than `threshold`.
inline std::vector<double> sampled_episodes(const famapf::Track& a, const famapf::Track& b,
                                            double threshold, int per_step = 100) {
  std::vector<double> starts;
  const double lo = std::max(a.samples.front().t, b.samples.front().t);
  const double hi = std::min(a.samples.back().t, b.samples.back().t);
  if (lo > hi) return starts;
  const long k0 = static_cast<long>(std::ceil(lo * per_step - 1e-9));
  const long k1 = static_cast<long>(std::floor(hi * per_step + 1e-9));
  bool inside = false;
  for (long k = k0; k <= k1; ++k) {
    const double t = static_cast<double>(k) / per_step;
    const famapf::Point p = track_at(a, t);
    const famapf::Point q = track_at(b, t);
    const bool close = std::hypot(p.x - q.x, p.y - q.y) < threshold;
    if (close && !inside) starts.push_back(t);
    inside = close;
  }
  return starts;
}

// Smallest sampled distance over the common support.
inline double sampled_min_distance(const famapf::Track& a, const famapf::Track& b,
                                   int per_step = 1000) {
  double best = 1e300;
  const double lo = std::max(a.samples.front().t, b.samples.front().t);
  const double hi = std::min(a.samples.back().t, b.samples.back().t);
  const long steps = static_cast<long>(std::ceil((hi - lo) * per_step));
  for (long k = 0; k <= steps; ++k) {
    const double t = std::min(hi, lo + static_cast<double>(k) / per_step);
    const famapf::Point p = track_at(a, t);
    const famapf::Point q = track_at(b, t);
    best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
  }
  return best;
}

}  // namespace oracle
