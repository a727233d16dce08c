#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "famapf/cbs.hpp"
#include "famapf/heuristic.hpp"
#include "famapf/paths.hpp"
#include "famapf/world.hpp"

namespace famapf {

struct TaskQueue {
  std::vector<int> starts;              // one per agent, pairwise distinct
  std::vector<std::vector<int>> goals;  // per agent, in visiting order

  int agent_count() const { return static_cast<int>(starts.size()); }
};

inline constexpr int kDefaultTasksPerAgent = 512;

// Distinct random starts and uniform random goals per agent. Goals are drawn from the cells
// reachable from the agent's start, and consecutive goals differ. Throws
// std::invalid_argument when agents < 1 or there are fewer passable cells than agents.
TaskQueue generate_task_queue(const GridMap& map, int agents, std::uint64_t seed,
                              int tasks_per_agent = kDefaultTasksPerAgent);

struct SimulationConfig {
  int sim_time = 2000;
  int replan_period = 20;  // h: steps executed between replans
  int horizon = 40;        // w: conflict-resolution window
  double omega1 = 1.5;
  double time_limit_s = 5.0;  // per iteration
  LowLevelKind low_level = LowLevelKind::sipp;

  // Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

struct IterationRecord {
  int start_time = 0;
  double runtime_s = 0.0;  // the time limit for iterations that failed
  bool feasible = true;
  SolveStatus status = SolveStatus::solved;
  std::vector<int> frozen;  // agents held in place for this window
};

struct TaskCompletion {
  int agent = 0;
  int goal = 0;
  int time = 0;
};

struct SimulationLog {
  int sim_time = 0;
  std::vector<std::vector<int>> positions;  // [t][agent], t = 0..sim_time
  std::vector<IterationRecord> iterations;
  std::vector<TaskCompletion> completions;

  int agent_count() const { return positions.empty() ? 0 : static_cast<int>(positions[0].size()); }
  // The executed route of one agent as a path from time 0.
  TimedPath agent_path(const GuidanceGraph& gg, int agent) const;
};

SimulationLog rhcr_run(const GuidanceGraph& gg, const TaskQueue& queue, const SimulationConfig& cfg,
                       HeuristicCache* cache = nullptr);

struct Metrics {
  double throughput = 0.0;       // completed tasks per timestep
  double mean_runtime_s = 0.0;   // per iteration
  int completed = 0;
  int iterations = 0;
  int failed_iterations = 0;
  std::optional<double> ua_conflicts_per_timestep;
};

Metrics compute_metrics(const SimulationLog& log, std::optional<long> ua_conflicts = std::nullopt);

// One JSON object per timestep and per iteration. Runtimes are left out unless requested so
// that the text is reproducible.
std::string log_to_jsonl(const SimulationLog& log, const GridMap& map, bool with_timing = false);

}  // namespace famapf
