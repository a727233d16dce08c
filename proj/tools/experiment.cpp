#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "famapf/guidance.hpp"
#include "famapf/parallel.hpp"
#include "famapf/rng.hpp"
#include "famapf/trajectories.hpp"

namespace famapf::cli {

std::string to_string(Variant v) { return v == Variant::baseline ? "baseline" : "flow-aware"; }

Variant parse_variant(const std::string& s) {
  if (s == "baseline") return Variant::baseline;
  if (s == "flow-aware") return Variant::flow_aware;
  throw ConfigError("unknown variant '" + s + "' (expected baseline or flow-aware)");
}

void ExperimentConfig::validate() const {
  if (maps.empty()) throw ConfigError("experiment needs at least one map");
  for (const auto& m : maps) {
    if (!std::filesystem::is_regular_file(m)) throw ConfigError("map file not found: " + m.string());
  }
  if (variants.empty()) throw ConfigError("experiment needs at least one variant");
  if (seeds.empty()) throw ConfigError("experiment needs at least one seed");
  if (agents < 1) throw ConfigError("agents must be at least 1");
  if (omega1 < 1.0) throw ConfigError("omega1 must be at least 1");
  if (!(step_cost > 0.0)) throw ConfigError("step_cost must be positive");
  if (dataset_size < 1) throw ConfigError("dataset_size must be at least 1");
  for (const auto& p : {scen, cliffmap, trajectories}) {
    if (p && !std::filesystem::is_regular_file(*p)) throw ConfigError("file not found: " + p->string());
  }
  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig c;
    for (const auto& m : j.at("maps")) c.maps.emplace_back(m.get<std::string>());
    const std::string mode = j.value("mode", std::string("lifelong"));
    if (mode != "lifelong" && mode != "oneshot") throw ConfigError("mode must be lifelong or oneshot");
    c.mode = mode == "lifelong" ? ExperimentMode::lifelong : ExperimentMode::oneshot;
    if (j.contains("variants")) {
      c.variants.clear();
      for (const auto& v : j.at("variants")) c.variants.push_back(parse_variant(v.get<std::string>()));
    }
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    c.agents = j.value("agents", c.agents);
    c.omega1 = j.value("omega1", c.omega1);
    c.step_cost = j.value("step_cost", c.step_cost);
    c.low_level = parse_low_level(j.value("low_level", to_string(c.low_level)));
    if (j.contains("sim")) {
      const auto& s = j.at("sim");
      c.sim.sim_time = s.value("sim_time", c.sim.sim_time);
      c.sim.replan_period = s.value("replan_period", c.sim.replan_period);
      c.sim.horizon = s.value("horizon", c.sim.horizon);
      c.sim.time_limit_s = s.value("time_limit_s", c.sim.time_limit_s);
    }
    c.sim.omega1 = c.omega1;
    c.sim.low_level = c.low_level;
    c.oneshot_time_limit_s = j.value("oneshot_time_limit_s", c.oneshot_time_limit_s);
    if (j.contains("scen")) c.scen = j.at("scen").get<std::string>();
    if (j.contains("ua_config")) {
      c.ua = ua_config_from_json(j.at("ua_config"));
    } else if (j.contains("ua_config_path")) {
      c.ua = load_ua_config(j.at("ua_config_path").get<std::string>());
    }
    if (j.contains("cliffmap")) c.cliffmap = j.at("cliffmap").get<std::string>();
    if (j.contains("trajectories")) c.trajectories = j.at("trajectories").get<std::string>();
    c.dataset_size = j.value("dataset_size", c.dataset_size);
    if (j.contains("fit")) c.fit = fit_config_from_json(j.at("fit"));
    c.radius_agent = j.value("radius_agent", c.radius_agent);
    c.radius_ua = j.value("radius_ua", c.radius_ua);
    c.jobs = j.value("jobs", c.jobs);
    c.output_dir = j.value("output_dir", c.output_dir.string());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

CliffMap make_cliffmap(const GridMap& map, const ExperimentConfig& cfg) {
  if (cfg.cliffmap) return load_cliffmap(read_text_file(*cfg.cliffmap));
  TrajectoryDataset data;
  if (cfg.trajectories) {
    data = load_trajectories(*cfg.trajectories);
  } else {
    data = to_dataset(generate_dataset(map, cfg.ua, cfg.dataset_size));
  }
  CliffMap m = build_cliffmap(map, bin_observations(data, map), cfg.fit);
  m.map_name = map.name();
  return m;
}

GuidanceGraph make_guidance(const GridMap& map, Variant v, const ExperimentConfig& cfg) {
  if (v == Variant::baseline) return build_guidance_graph(map, CliffMap::empty(map), cfg.step_cost);
  return build_guidance_graph(map, make_cliffmap(map, cfg), cfg.step_cost);
}

namespace {

UAConfig stream_config(const ExperimentConfig& cfg, std::uint64_t seed) {
  UAConfig ua = cfg.ua;
  ua.seed = seed;
  return ua;
}

Scenario random_scenario(const GridMap& map, int n, std::uint64_t seed) {
  std::vector<int> cells = map.passable_indices();
  if (static_cast<int>(cells.size()) < n) throw std::invalid_argument("map has fewer passable cells than agents");
  Rng rng(seed, 0x5CE7);
  auto draw = [&]() {
    std::vector<int> c = cells;
    std::vector<int> out;
    for (int i = 0; i < n; ++i) {
      const int j = i + rng.below(static_cast<int>(c.size()) - i);
      std::swap(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]);
      out.push_back(c[static_cast<std::size_t>(i)]);
    }
    return out;
  };
  const std::vector<int> starts = draw();
  const std::vector<int> goals = draw();
  Scenario s;
  for (int i = 0; i < n; ++i) {
    s.agents.push_back({map.vertex(starts[static_cast<std::size_t>(i)]),
                        map.vertex(goals[static_cast<std::size_t>(i)])});
  }
  return s;
}

}  // namespace

RunRow run_lifelong(const GridMap& map, const GuidanceGraph& gg, Variant v, std::uint64_t seed,
                    const ExperimentConfig& cfg) {
  RunRow row;
  row.map = map.name();
  row.variant = v;
  row.seed = seed;
  SimulationConfig sim = cfg.sim;
  sim.omega1 = cfg.omega1;
  sim.low_level = cfg.low_level;
  const TaskQueue queue = generate_task_queue(map, cfg.agents, seed);
  const SimulationLog log = rhcr_run(gg, queue, sim);
  const auto stream = generate_stream(map, stream_config(cfg, seed), StreamMode::lifelong, sim.sim_time);
  std::vector<TimedPath> paths;
  for (int i = 0; i < log.agent_count(); ++i) paths.push_back(log.agent_path(gg, i));
  const ConflictReport rep = count_conflicts(agent_tracks(map, paths, sim.sim_time), ua_tracks(stream),
                                             cfg.radius_agent, cfg.radius_ua, Execution::serial);
  const Metrics m = compute_metrics(log, rep.total);
  row.throughput = m.throughput;
  row.completed = m.completed;
  row.ua_conflicts = rep.total;
  row.ua_conflicts_per_timestep = m.ua_conflicts_per_timestep.value_or(0.0);
  row.failed_iterations = m.failed_iterations;
  row.solved = m.failed_iterations == 0;
  row.runtime_s = m.mean_runtime_s;
  return row;
}

RunRow run_oneshot(const GridMap& map, const GuidanceGraph& gg, Variant v, std::uint64_t seed,
                   const ExperimentConfig& cfg) {
  RunRow row;
  row.map = map.name();
  row.variant = v;
  row.seed = seed;
  const Scenario scen = cfg.scen ? parse_scen(read_text_file(*cfg.scen), cfg.agents, map)
                                 : random_scenario(map, cfg.agents, seed);
  CbsConfig cc;
  cc.omega1 = cfg.omega1;
  cc.time_limit_s = cfg.oneshot_time_limit_s;
  cc.low_level = cfg.low_level;
  const SolveResult r = cbs_solve(gg, scen, cc);
  row.solved = r.solved();
  row.runtime_s = r.solution.stats.runtime_s;
  if (r.solved()) {
    row.cost = r.solution.cost;
    int t_end = 0;
    for (const TimedPath& p : r.solution.paths) t_end = std::max(t_end, p.length());
    const auto stream = generate_stream(map, stream_config(cfg, seed), StreamMode::oneshot, 0);
    const ConflictReport rep = count_conflicts(agent_tracks(map, r.solution.paths, t_end),
                                               ua_tracks(stream), cfg.radius_agent, cfg.radius_ua,
                                               Execution::serial);
    row.ua_conflicts = rep.total;
    row.ua_conflicts_per_timestep = t_end > 0 ? static_cast<double>(rep.total) / t_end : 0.0;
  }
  return row;
}

Report run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<GridMap> maps;
  for (const auto& p : cfg.maps) maps.push_back(load_map_file(p));
  // guidance graphs are shared by all seeds of a (map, variant)
  std::vector<std::vector<std::unique_ptr<GuidanceGraph>>> graphs(maps.size());
  std::vector<std::vector<std::string>> graph_errors(maps.size());
  for (std::size_t m = 0; m < maps.size(); ++m) {
    for (Variant v : cfg.variants) {
      try {
        graphs[m].push_back(std::make_unique<GuidanceGraph>(make_guidance(maps[m], v, cfg)));
        graph_errors[m].emplace_back();
      } catch (const std::exception& e) {
        graphs[m].push_back(nullptr);
        graph_errors[m].emplace_back(e.what());
      }
    }
  }
  struct Job {
    std::size_t map, variant;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
      for (std::uint64_t s : cfg.seeds) jobs.push_back({m, v, s});
    }
  }
  Report rep;
  rep.rows.resize(jobs.size());
  const int n = static_cast<int>(jobs.size());
  const int threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    const Job& job = jobs[static_cast<std::size_t>(i)];
    const Variant v = cfg.variants[job.variant];
    RunRow& row = rep.rows[static_cast<std::size_t>(i)];
    const GuidanceGraph* gg = graphs[job.map][job.variant].get();
    try {
      if (!gg) throw std::runtime_error(graph_errors[job.map][job.variant]);
      row = cfg.mode == ExperimentMode::lifelong ? run_lifelong(maps[job.map], *gg, v, job.seed, cfg)
                                                 : run_oneshot(maps[job.map], *gg, v, job.seed, cfg);
    } catch (const std::exception& e) {
      row = RunRow{};
      row.map = maps[job.map].name();
      row.variant = v;
      row.seed = job.seed;
      row.ok = false;
      row.error = e.what();
    }
  }
  rep.aggregates = aggregate(rep.rows);
  return rep;
}

std::vector<Aggregate> aggregate(const std::vector<RunRow>& rows) {
  std::vector<Aggregate> out;
  std::vector<std::vector<const RunRow*>> groups;
  for (const RunRow& r : rows) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Aggregate& a) { return a.map == r.map && a.variant == r.variant; });
    if (it == out.end()) {
      out.push_back({});
      out.back().map = r.map;
      out.back().variant = r.variant;
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
  }
  auto stats = [](const std::vector<double>& x, double& mean, double& sd) {
    mean = 0.0;
    sd = 0.0;
    if (x.empty()) return;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    if (x.size() < 2) return;
    for (double v : x) sd += (v - mean) * (v - mean);
    sd = std::sqrt(sd / static_cast<double>(x.size() - 1));
  };
  for (std::size_t g = 0; g < out.size(); ++g) {
    std::vector<double> tp, cf, rt;
    int solved = 0;
    for (const RunRow* r : groups[g]) {
      if (!r->ok) continue;
      tp.push_back(r->throughput);
      cf.push_back(static_cast<double>(r->ua_conflicts));
      rt.push_back(r->runtime_s);
      solved += r->solved ? 1 : 0;
    }
    Aggregate& a = out[g];
    a.runs = static_cast<int>(tp.size());
    a.solved_rate = a.runs > 0 ? static_cast<double>(solved) / a.runs : 0.0;
    stats(tp, a.throughput_mean, a.throughput_std);
    stats(cf, a.conflicts_mean, a.conflicts_std);
    stats(rt, a.runtime_mean, a.runtime_std);
  }
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string report_csv(const Report& r) {
  std::ostringstream os;
  os << "map,variant,seed,ok,solved,throughput,completed,cost,ua_conflicts,ua_conflicts_per_timestep,"
        "failed_iterations,error\n";
  for (const RunRow& row : r.rows) {
    std::string err = row.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << row.map << ',' << to_string(row.variant) << ',' << row.seed << ',' << (row.ok ? 1 : 0) << ','
       << (row.solved ? 1 : 0) << ',' << fmt(row.throughput) << ',' << row.completed << ','
       << fmt(row.cost) << ',' << row.ua_conflicts << ',' << fmt(row.ua_conflicts_per_timestep) << ','
       << row.failed_iterations << ',' << err << '\n';
  }
  os << "\nmap,variant,runs,solved_rate,throughput_mean,throughput_std,conflicts_mean,conflicts_std\n";
  for (const Aggregate& a : r.aggregates) {
    os << a.map << ',' << to_string(a.variant) << ',' << a.runs << ',' << fmt(a.solved_rate) << ','
       << fmt(a.throughput_mean) << ',' << fmt(a.throughput_std) << ',' << fmt(a.conflicts_mean) << ','
       << fmt(a.conflicts_std) << '\n';
  }
  return os.str();
}

std::string timing_csv(const Report& r) {
  std::ostringstream os;
  os << "map,variant,seed,runtime_s\n";
  for (const RunRow& row : r.rows) {
    os << row.map << ',' << to_string(row.variant) << ',' << row.seed << ',' << fmt(row.runtime_s) << '\n';
  }
  os << "\nmap,variant,runtime_mean,runtime_std\n";
  for (const Aggregate& a : r.aggregates) {
    os << a.map << ',' << to_string(a.variant) << ',' << fmt(a.runtime_mean) << ',' << fmt(a.runtime_std)
       << '\n';
  }
  return os.str();
}

nlohmann::json report_json(const Report& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const RunRow& row : r.rows) {
    rows.push_back({{"map", row.map},
                    {"variant", to_string(row.variant)},
                    {"seed", row.seed},
                    {"ok", row.ok},
                    {"error", row.error},
                    {"solved", row.solved},
                    {"throughput", row.throughput},
                    {"completed", row.completed},
                    {"cost", row.cost},
                    {"ua_conflicts", row.ua_conflicts},
                    {"ua_conflicts_per_timestep", row.ua_conflicts_per_timestep},
                    {"failed_iterations", row.failed_iterations}});
  }
  nlohmann::json aggs = nlohmann::json::array();
  for (const Aggregate& a : r.aggregates) {
    aggs.push_back({{"map", a.map},
                    {"variant", to_string(a.variant)},
                    {"runs", a.runs},
                    {"solved_rate", a.solved_rate},
                    {"throughput_mean", a.throughput_mean},
                    {"throughput_std", a.throughput_std},
                    {"conflicts_mean", a.conflicts_mean},
                    {"conflicts_std", a.conflicts_std}});
  }
  return {{"rows", rows}, {"aggregates", aggs}};
}

}  // namespace famapf::cli
