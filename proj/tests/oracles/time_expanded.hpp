#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "famapf/guidance.hpp"

namespace oracle {

struct TimedObstacles {
  std::set<std::pair<int, int>> vertices;         // (v, t)
  std::set<std::tuple<int, int, int>> edges;      // (from, to, arrival t)

  int last_time() const {
    int last = -1;
    for (const auto& [v, t] : vertices) last = std::max(last, t);
    for (const auto& [a, b, t] : edges) last = std::max(last, t);
    return last;
  }
};

// Dijkstra over the explicit (vertex, time) graph. One-shot: the search ends at the goal at a
// time after which the goal is never blocked. Windowed: additionally, a path may stop after
// exactly `horizon` steps and pay h_to_goal of its final vertex on top.
inline double time_expanded_cost(const famapf::GuidanceGraph& gg, int start, int goal,
                                 const TimedObstacles& obs,
                                 std::optional<int> horizon = std::nullopt,
                                 const std::vector<double>* h_to_goal = nullptr) {
  const double inf = std::numeric_limits<double>::infinity();
  const int n = gg.size();
  const int t_max = horizon ? *horizon : obs.last_time() + 2 * n + 2;
  int goal_free_after = -1;
  for (const auto& [v, t] : obs.vertices)
    if (v == goal) goal_free_after = std::max(goal_free_after, t);

  if (obs.vertices.count({start, 0})) return inf;
  std::vector<double> dist(static_cast<std::size_t>(n) * (t_max + 1), inf);
  auto id = [&](int v, int t) { return static_cast<std::size_t>(t) * n + v; };
  using Entry = std::pair<double, std::pair<int, int>>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[id(start, 0)] = 0.0;
  open.push({0.0, {start, 0}});
  double best = inf;
  while (!open.empty()) {
    auto [g, vt] = open.top();
    open.pop();
    auto [v, t] = vt;
    if (g > dist[id(v, t)]) continue;
    if (horizon) {
      if (v == goal && t > goal_free_after) best = std::min(best, g);
      if (t == *horizon) {
        best = std::min(best, g + (*h_to_goal)[static_cast<std::size_t>(v)]);
        continue;
      }
    } else if (v == goal && t > goal_free_after) {
      return g;
    }
    if (t == t_max) continue;
    for (famapf::Action a : famapf::kAllActions) {
      const int u = gg.target(v, a);
      if (u < 0) continue;
      if (obs.vertices.count({u, t + 1}) || obs.edges.count({v, u, t + 1})) continue;
      const double c = g + gg.weight(v, a);
      if (c < dist[id(u, t + 1)]) {
        dist[id(u, t + 1)] = c;
        open.push({c, {u, t + 1}});
      }
    }
  }
  return best;
}

}  // namespace oracle
