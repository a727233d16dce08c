#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "famapf/heuristic.hpp"
#include "famapf/paths.hpp"
#include "famapf/reservation.hpp"

namespace famapf {

class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  static Deadline none() { return Deadline(); }
  static Deadline after(double seconds) {
    Deadline d;
    d.at_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(seconds));
    return d;
  }
  bool expired() const { return at_ && Clock::now() >= *at_; }

 private:
  std::optional<Clock::time_point> at_;
};

// Single-agent request. The agent starts at `start` at relative time 0 and visits `goals` in
// order; one-shot plans have a single goal and end once the agent can rest there forever.
// With a horizon the search stops at t == horizon and the remaining cost-to-go is taken from
// the heuristic (exact without reservations beyond the horizon).
struct LowLevelQuery {
  const GuidanceGraph* graph = nullptr;
  int start = 0;
  std::vector<int> goals;
  std::vector<const HeuristicTable*> heuristics;  // one table per goal
  const ReservationTable* reservations = nullptr;
  const ConflictAvoidanceTable* avoid = nullptr;
  double omega1 = 1.0;
  std::optional<int> horizon;
  Deadline deadline;
  std::uint64_t node_limit = 0;  // 0 = unlimited
};

enum class SearchStatus { found, no_path, timeout, node_limit };

struct LowLevelResult {
  SearchStatus status = SearchStatus::no_path;
  TimedPath path;
  double lower_bound = 0.0;  // minimum f in OPEN when the path was returned
  std::uint64_t expanded = 0;
  std::uint64_t generated = 0;

  bool found() const { return status == SearchStatus::found; }
};

// Focal search over (vertex, time, goal index): OPEN by f = g + h, FOCAL (f within omega1 of
// the minimum) ranked by fewest conflicts with the avoidance table, then f, then larger g.
LowLevelResult spacetime_astar(const LowLevelQuery& q);

// Safe-interval variant of the same search. Returns the same optimal cost as
// spacetime_astar for omega1 == 1.
LowLevelResult sipp(const LowLevelQuery& q);

// Convenience forms for a single goal.
LowLevelResult spacetime_astar(const GuidanceGraph& gg, int start, int goal,
                               const std::vector<Constraint>& constraints, const HeuristicTable& h,
                               double omega1, std::optional<int> horizon = std::nullopt);
LowLevelResult sipp(const GuidanceGraph& gg, int start, int goal, const ReservationTable& obstacles,
                    const HeuristicTable& h, double omega1);

namespace detail {

// h(v, k) for a goal chain: distance to goal k plus the chained distances between the
// remaining goals; after the last goal, distance back to it.
class ChainHeuristic {
 public:
  explicit ChainHeuristic(const LowLevelQuery& q);
  double operator()(int v, int k) const;
  int goal_count() const { return static_cast<int>(goals_.size()); }
  int goal(int k) const { return goals_[static_cast<std::size_t>(k)]; }
  // Goal index after arriving at v holding index k.
  int advance(int v, int k) const;

 private:
  std::vector<int> goals_;
  std::vector<const HeuristicTable*> tables_;
  std::vector<double> rest_;
};

TimedPath assemble_path(std::vector<int> vertices, std::vector<Action> actions);

}  // namespace detail

}  // namespace famapf
