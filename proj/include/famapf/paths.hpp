#pragma once

#include <cstdint>
#include <vector>

#include "famapf/guidance.hpp"
#include "famapf/world.hpp"

namespace famapf {

// Timed action sequence of one agent. vertices[i] is the location at start_time + i;
// actions[i] moves from vertices[i] to vertices[i + 1].
struct TimedPath {
  int agent = 0;
  int start_time = 0;
  std::vector<int> vertices;
  std::vector<Action> actions;
  double cost = 0.0;  // guidance-graph cost; windowed plans add the remaining cost-to-go

  int length() const { return static_cast<int>(actions.size()); }
  bool empty() const { return vertices.empty(); }
  // Location at relative time t; agents rest at their last vertex afterwards.
  int at(int t) const {
    if (t <= 0) return vertices.front();
    if (t >= static_cast<int>(vertices.size())) return vertices.back();
    return vertices[static_cast<std::size_t>(t)];
  }
};

// Sum of edge weights along the recorded actions.
double path_cost(const GuidanceGraph& gg, const TimedPath& p);
// True when every action is an edge of the graph and leads to the next recorded vertex.
bool path_is_consistent(const GuidanceGraph& gg, const TimedPath& p);

enum class ConflictKind : std::uint8_t { vertex, edge };

// Vertex constraint: agent may not be at `to` at time t (from == to).
// Edge constraint: agent may not traverse from -> to arriving at time t.
struct Constraint {
  ConflictKind kind = ConflictKind::vertex;
  int agent = 0;
  int from = 0;
  int to = 0;
  int t = 0;
};

// Vertex conflict: a1 and a2 both at v1 (== v2) at time t.
// Edge conflict: a1 moves v1 -> v2 while a2 moves v2 -> v1, arriving at time t.
struct AgentConflict {
  ConflictKind kind = ConflictKind::vertex;
  int a1 = 0;
  int a2 = 0;
  int v1 = 0;
  int v2 = 0;
  int t = 0;
};

struct SolverStats {
  std::uint64_t hl_expanded = 0;
  std::uint64_t hl_generated = 0;
  std::uint64_t ll_searches = 0;
  std::uint64_t ll_expanded = 0;
  double runtime_s = 0.0;
};

struct Solution {
  std::vector<TimedPath> paths;
  double cost = 0.0;   // sum of path costs on the guidance graph
  int unit_cost = 0;   // sum of path lengths, i.e. cost with every edge at 1
  SolverStats stats;
};

}  // namespace famapf
