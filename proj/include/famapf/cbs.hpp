#pragma once

#include <optional>
#include <string>
#include <vector>

#include "famapf/heuristic.hpp"
#include "famapf/lowlevel.hpp"
#include "famapf/paths.hpp"
#include "famapf/reservation.hpp"
#include "famapf/world.hpp"

namespace famapf {

enum class LowLevelKind { astar, sipp };

std::string to_string(LowLevelKind k);
LowLevelKind parse_low_level(const std::string& s);

struct CbsConfig {
  double omega1 = 1.0;
  double time_limit_s = 5.0;
  std::optional<int> horizon;  // windowed: conflicts after the horizon are ignored
  LowLevelKind low_level = LowLevelKind::astar;
  std::uint64_t max_hl_nodes = 0;  // 0 = unlimited
};

struct MapfAgent {
  int start = 0;
  std::vector<int> goals;  // visited in order
};

struct MapfProblem {
  std::vector<MapfAgent> agents;
  // Shared hard obstacles, e.g. frozen agents during lifelong replanning.
  ReservationTable obstacles;
};

enum class SolveStatus { solved, infeasible, timeout, node_limit };

std::string to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  Solution solution;  // valid when solved
  // Paths of the high-level node with the fewest conflicts seen; empty if the root failed.
  std::vector<TimedPath> best_effort;
  std::vector<AgentConflict> best_effort_conflicts;
  std::string reason;

  bool solved() const { return status == SolveStatus::solved; }
};

// CBS over focal low-level searches (ECBS). The returned sum of costs is within omega1 of
// the optimum on the guidance graph. Path agent ids are problem indices.
SolveResult cbs_solve(const GuidanceGraph& gg, const MapfProblem& problem, const CbsConfig& cfg,
                      HeuristicCache* cache = nullptr);
SolveResult cbs_solve(const GuidanceGraph& gg, const Scenario& scenario, const CbsConfig& cfg,
                      HeuristicCache* cache = nullptr);

// Single-agent query for one agent of a problem under extra constraints.
LowLevelResult plan_agent(const GuidanceGraph& gg, const MapfAgent& agent, HeuristicCache& cache,
                          const ReservationTable& reservations, const ConflictAvoidanceTable* cat,
                          const CbsConfig& cfg, Deadline deadline);

}  // namespace famapf
