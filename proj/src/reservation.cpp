#include "famapf/reservation.hpp"

#include <algorithm>

namespace famapf {

double path_cost(const GuidanceGraph& gg, const TimedPath& p) {
  double c = 0.0;
  for (std::size_t i = 0; i < p.actions.size(); ++i) c += gg.weight(p.vertices[i], p.actions[i]);
  return c;
}

bool path_is_consistent(const GuidanceGraph& gg, const TimedPath& p) {
  if (p.vertices.empty() || p.vertices.size() != p.actions.size() + 1) return false;
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    if (gg.target(p.vertices[i], p.actions[i]) != p.vertices[i + 1]) return false;
  }
  return true;
}

void ReservationTable::block_vertex(int v, int t) {
  if (!vertex_.insert(key(v, t)).second) return;
  auto& times = vertex_times_[v];
  times.insert(std::upper_bound(times.begin(), times.end(), t), t);
  last_time_ = std::max(last_time_, t);
}

void ReservationTable::block_edge(int from, int to, int t) {
  edge_.insert(edge_key(from, to, t));
  last_time_ = std::max(last_time_, t);
}

void ReservationTable::add(const Constraint& c) {
  if (c.kind == ConflictKind::vertex) {
    block_vertex(c.to, c.t);
  } else {
    block_edge(c.from, c.to, c.t);
  }
}

bool ReservationTable::vertex_blocked(int v, int t) const { return vertex_.contains(key(v, t)); }

bool ReservationTable::edge_blocked(int from, int to, int t) const {
  return edge_.contains(edge_key(from, to, t));
}

int ReservationTable::last_vertex_time(int v) const {
  const auto it = vertex_times_.find(v);
  return it == vertex_times_.end() || it->second.empty() ? -1 : it->second.back();
}

std::vector<SafeInterval> ReservationTable::safe_intervals(int v) const {
  std::vector<SafeInterval> out;
  const auto it = vertex_times_.find(v);
  int lo = 0;
  if (it != vertex_times_.end()) {
    for (int t : it->second) {
      if (t < 0) continue;
      if (t > lo) out.push_back({lo, t - 1});
      lo = t + 1;
    }
  }
  out.push_back({lo, kForever});
  return out;
}

void ConflictAvoidanceTable::add_path(const TimedPath& p, bool rest_at_end) {
  if (p.vertices.empty()) return;
  const int n = static_cast<int>(p.vertices.size());
  for (int t = 0; t < n; ++t) {
    const int v = p.vertices[static_cast<std::size_t>(t)];
    if (rest_at_end && t == n - 1) {
      rest_[v].push_back(t);
    } else {
      ++occupancy_[key(v, t)];
    }
    if (t > 0) {
      const int from = p.vertices[static_cast<std::size_t>(t - 1)];
      if (from != v) moves_[key(v, t)].push_back(from);
    }
  }
  max_time_ = std::max(max_time_, n - 1);
}

int ConflictAvoidanceTable::vertex_count(int v, int t) const {
  int c = 0;
  if (const auto it = occupancy_.find(key(v, t)); it != occupancy_.end()) c += it->second;
  if (const auto it = rest_.find(v); it != rest_.end()) {
    for (int start : it->second) c += start <= t ? 1 : 0;
  }
  return c;
}

int ConflictAvoidanceTable::edge_count(int from, int to, int t) const {
  // a swap: the other agent arrives at `from` at t coming from `to`
  const auto it = moves_.find(key(from, t));
  if (it == moves_.end()) return 0;
  return static_cast<int>(std::count(it->second.begin(), it->second.end(), to));
}

}  // namespace famapf
