#pragma once

#include <limits>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "famapf/guidance.hpp"
#include "famapf/parallel.hpp"

namespace famapf {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Exact cost-to-goal on the guidance graph; infinity where the goal is unreachable.
class HeuristicTable {
 public:
  HeuristicTable(int goal, std::vector<double> h) : goal_(goal), h_(std::move(h)) {}

  int goal() const { return goal_; }
  double operator[](int v) const { return h_[static_cast<std::size_t>(v)]; }
  const std::vector<double>& values() const { return h_; }

 private:
  int goal_;
  std::vector<double> h_;
};

// Dijkstra from the goal over reversed edges. Throws std::invalid_argument when the goal is
// blocked.
HeuristicTable precompute_heuristic(const GuidanceGraph& gg, int goal);

// One table per goal, in input order.
std::vector<HeuristicTable> precompute_heuristics(const GuidanceGraph& gg, std::span<const int> goals,
                                                  Execution exec = Execution::parallel);

// Lazily filled goal -> table map. Not thread-safe; give each concurrent solve its own.
class HeuristicCache {
 public:
  explicit HeuristicCache(const GuidanceGraph& gg) : gg_(&gg) {}

  const HeuristicTable& get(int goal);
  void prefetch(std::span<const int> goals, Execution exec = Execution::parallel);
  const GuidanceGraph& graph() const { return *gg_; }

 private:
  const GuidanceGraph* gg_;
  std::unordered_map<int, std::unique_ptr<HeuristicTable>> tables_;
};

}  // namespace famapf
