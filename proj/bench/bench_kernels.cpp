// Serial vs OpenMP timings for the data-parallel kernels on a 32x32 two-stream workload.

#include <benchmark/benchmark.h>

#include <string>

#include "famapf/cliffmap.hpp"
#include "famapf/guidance.hpp"
#include "famapf/heuristic.hpp"
#include "famapf/lifelong.hpp"
#include "famapf/uasim.hpp"

using namespace famapf;

namespace {

struct Workload {
  GridMap map;
  CellObservations binned;
  GuidanceGraph gg;
  std::vector<int> goals;
  std::vector<Track> agents;
  std::vector<Track> uas;
};

const Workload& workload() {
  static const Workload w = [] {
    const std::string dir = FAMAPF_DATA_DIR;
    GridMap map = load_map_file(dir + "/maps/empty-32-32.map");
    const UAConfig ua = load_ua_config(dir + "/ua/two-streams-32.json");
    CellObservations binned = bin_observations(to_dataset(generate_dataset(map, ua, 4000)), map);
    GuidanceGraph gg = build_guidance_graph(map, build_cliffmap(map, binned, FitConfig{}), 1.0);
    SimulationConfig sim;
    sim.sim_time = 200;
    const SimulationLog log = rhcr_run(gg, generate_task_queue(map, 30, 1), sim);
    std::vector<TimedPath> paths;
    for (int i = 0; i < log.agent_count(); ++i) paths.push_back(log.agent_path(gg, i));
    std::vector<Track> agents = agent_tracks(map, paths, sim.sim_time);
    std::vector<Track> uas = ua_tracks(generate_stream(map, ua, StreamMode::lifelong, sim.sim_time));
    std::vector<int> goals = map.passable_indices();
    return Workload{map, std::move(binned), std::move(gg), std::move(goals), std::move(agents), std::move(uas)};
  }();
  return w;
}

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_BuildCliffmap(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(build_cliffmap(w.map, w.binned, FitConfig{}, mode(state)));
}

void BM_PrecomputeHeuristics(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(precompute_heuristics(w.gg, w.goals, mode(state)));
}

void BM_CountConflicts(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state)
    benchmark::DoNotOptimize(count_conflicts(w.agents, w.uas, kDefaultRadius, kDefaultRadius, mode(state)));
}

}  // namespace

BENCHMARK(BM_BuildCliffmap)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrecomputeHeuristics)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountConflicts)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
