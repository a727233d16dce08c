#pragma once

#include <climits>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "famapf/paths.hpp"

namespace famapf {

inline constexpr int kForever = INT_MAX;

struct SafeInterval {
  int lo = 0;
  int hi = kForever;  // inclusive; kForever for the unbounded tail
};

// Hard timed obstacles for one agent: blocked (vertex, time) pairs and blocked edge
// traversals (keyed by arrival time).
class ReservationTable {
 public:
  void block_vertex(int v, int t);
  void block_edge(int from, int to, int t);
  void add(const Constraint& c);

  bool vertex_blocked(int v, int t) const;
  bool edge_blocked(int from, int to, int t) const;
  bool empty() const { return vertex_.empty() && edge_.empty(); }

  // Latest time mentioned by any entry, -1 when empty.
  int last_time() const { return last_time_; }
  // Latest blocked time at v, -1 when v is never blocked.
  int last_vertex_time(int v) const;
  // Maximal runs of unblocked times at v, in increasing order.
  std::vector<SafeInterval> safe_intervals(int v) const;

 private:
  static std::uint64_t key(int a, int t) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(t);
  }
  // exact packing for up to 2^21 vertices and 2^22 timesteps
  static std::uint64_t edge_key(int from, int to, int t) {
    return (static_cast<std::uint64_t>(from) << 43) | (static_cast<std::uint64_t>(to) << 22) |
           static_cast<std::uint64_t>(t);
  }

  std::unordered_set<std::uint64_t> vertex_;
  std::unordered_map<int, std::vector<int>> vertex_times_;  // sorted, unique
  std::unordered_set<std::uint64_t> edge_;
  int last_time_ = -1;
};

// Soft occupancy of other agents' current paths; used to rank focal candidates by the number
// of conflicts they would create.
class ConflictAvoidanceTable {
 public:
  // rest_at_end: the agent keeps occupying its last vertex after the path ends.
  void add_path(const TimedPath& p, bool rest_at_end = true);

  int vertex_count(int v, int t) const;
  // Number of other agents moving to -> from arriving at t (a swap with from -> to).
  int edge_count(int from, int to, int t) const;
  int max_time() const { return max_time_; }
  bool empty() const { return occupancy_.empty() && rest_.empty(); }

 private:
  static std::uint64_t key(int v, int t) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32) |
           static_cast<std::uint32_t>(t);
  }
  std::unordered_map<std::uint64_t, int> occupancy_;
  std::unordered_map<std::uint64_t, std::vector<int>> moves_;  // (to, t) -> list of from
  std::unordered_map<int, std::vector<int>> rest_;            // v -> rest start times
  int max_time_ = -1;
};

}  // namespace famapf
