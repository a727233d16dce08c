#include "famapf/heuristic.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace famapf {

HeuristicTable precompute_heuristic(const GuidanceGraph& gg, int goal) {
  if (goal < 0 || goal >= gg.size() || !gg.map().passable(goal)) {
    throw std::invalid_argument("heuristic goal must be a passable vertex");
  }
  std::vector<double> h(static_cast<std::size_t>(gg.size()), kInfinity);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  h[static_cast<std::size_t>(goal)] = 0.0;
  open.emplace(0.0, goal);
  const GridMap& map = gg.map();
  while (!open.empty()) {
    const auto [d, v] = open.top();
    open.pop();
    if (d > h[static_cast<std::size_t>(v)]) continue;
    const Vertex pv = map.vertex(v);
    for (Action a : kMoveActions) {
      // predecessor u reaches v by taking action a
      const Vertex pu = step(pv, reverse(a));
      if (!map.passable(pu)) continue;
      const int u = map.index(pu);
      if (gg.target(u, a) != v) continue;
      const double nd = d + gg.weight(u, a);
      if (nd < h[static_cast<std::size_t>(u)]) {
        h[static_cast<std::size_t>(u)] = nd;
        open.emplace(nd, u);
      }
    }
  }
  return HeuristicTable(goal, std::move(h));
}

std::vector<HeuristicTable> precompute_heuristics(const GuidanceGraph& gg, std::span<const int> goals,
                                                  Execution exec) {
  const int n = static_cast<int>(goals.size());
  std::vector<std::vector<double>> values(goals.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      values[static_cast<std::size_t>(i)] =
          precompute_heuristic(gg, goals[static_cast<std::size_t>(i)]).values();
    }
  } else {
    for (int i = 0; i < n; ++i) {
      values[static_cast<std::size_t>(i)] =
          precompute_heuristic(gg, goals[static_cast<std::size_t>(i)]).values();
    }
  }
  std::vector<HeuristicTable> out;
  out.reserve(goals.size());
  for (std::size_t i = 0; i < goals.size(); ++i) out.emplace_back(goals[i], std::move(values[i]));
  return out;
}

const HeuristicTable& HeuristicCache::get(int goal) {
  auto it = tables_.find(goal);
  if (it == tables_.end()) {
    it = tables_.emplace(goal, std::make_unique<HeuristicTable>(precompute_heuristic(*gg_, goal))).first;
  }
  return *it->second;
}

void HeuristicCache::prefetch(std::span<const int> goals, Execution exec) {
  std::vector<int> missing;
  for (int g : goals) {
    if (!tables_.contains(g) && std::find(missing.begin(), missing.end(), g) == missing.end()) {
      missing.push_back(g);
    }
  }
  auto tables = precompute_heuristics(*gg_, missing, exec);
  for (auto& t : tables) {
    const int g = t.goal();
    tables_.emplace(g, std::make_unique<HeuristicTable>(std::move(t)));
  }
}

}  // namespace famapf
