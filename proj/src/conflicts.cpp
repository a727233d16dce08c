#include "famapf/conflicts.hpp"

#include <algorithm>
#include <unordered_map>

namespace famapf {

namespace {

int last_time(std::span<const TimedPath> paths, std::optional<int> horizon) {
  int t_max = 0;
  for (const TimedPath& p : paths) t_max = std::max(t_max, static_cast<int>(p.vertices.size()) - 1);
  return horizon ? std::min(t_max, *horizon) : t_max;
}

void conflicts_at(std::span<const TimedPath> paths, int t, std::vector<AgentConflict>& out) {
  const int n = static_cast<int>(paths.size());
  std::unordered_map<int, std::vector<int>> at;
  for (int i = 0; i < n; ++i) {
    if (paths[static_cast<std::size_t>(i)].empty()) continue;
    at[paths[static_cast<std::size_t>(i)].at(t)].push_back(i);
  }
  const std::size_t first = out.size();
  for (auto& [v, agents] : at) {
    for (std::size_t a = 0; a < agents.size(); ++a) {
      for (std::size_t b = a + 1; b < agents.size(); ++b) {
        out.push_back({ConflictKind::vertex, agents[a], agents[b], v, v, t});
      }
    }
  }
  if (t > 0) {
    // a moving i->j arrival, keyed by (from, to)
    std::unordered_map<std::uint64_t, std::vector<int>> moves;
    auto key = [](int from, int to) {
      return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
             static_cast<std::uint32_t>(to);
    };
    for (int i = 0; i < n; ++i) {
      const TimedPath& p = paths[static_cast<std::size_t>(i)];
      if (p.empty()) continue;
      const int from = p.at(t - 1);
      const int to = p.at(t);
      if (from != to) moves[key(from, to)].push_back(i);
    }
    for (int i = 0; i < n; ++i) {
      const TimedPath& p = paths[static_cast<std::size_t>(i)];
      if (p.empty()) continue;
      const int from = p.at(t - 1);
      const int to = p.at(t);
      if (from == to) continue;
      const auto it = moves.find(key(to, from));
      if (it == moves.end()) continue;
      for (int j : it->second) {
        if (j > i) out.push_back({ConflictKind::edge, i, j, from, to, t});
      }
    }
  }
  std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
            [](const AgentConflict& a, const AgentConflict& b) {
              if (a.kind != b.kind) return a.kind < b.kind;
              if (a.a1 != b.a1) return a.a1 < b.a1;
              return a.a2 < b.a2;
            });
}

}  // namespace

std::vector<AgentConflict> detect_conflicts(std::span<const TimedPath> paths,
                                            std::optional<int> horizon) {
  std::vector<AgentConflict> out;
  const int t_end = last_time(paths, horizon);
  for (int t = 0; t <= t_end; ++t) conflicts_at(paths, t, out);
  return out;
}

std::optional<AgentConflict> first_conflict(std::span<const TimedPath> paths,
                                            std::optional<int> horizon) {
  std::vector<AgentConflict> found;
  const int t_end = last_time(paths, horizon);
  for (int t = 0; t <= t_end; ++t) {
    conflicts_at(paths, t, found);
    if (!found.empty()) return found.front();
  }
  return std::nullopt;
}

}  // namespace famapf
