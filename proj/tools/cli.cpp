#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "experiment.hpp"
#include "famapf/cbs.hpp"
#include "famapf/cliffmap.hpp"
#include "famapf/guidance.hpp"
#include "famapf/lifelong.hpp"
#include "famapf/svg.hpp"
#include "famapf/trajectories.hpp"
#include "famapf/uasim.hpp"

namespace famapf::cli {

namespace fs = std::filesystem;

nlohmann::json solution_to_json(const GridMap& map, const Solution& s, const std::string& status) {
  nlohmann::json paths = nlohmann::json::array();
  for (const TimedPath& p : s.paths) {
    nlohmann::json vs = nlohmann::json::array();
    for (int v : p.vertices) {
      const Vertex q = map.vertex(v);
      vs.push_back({q.x, q.y});
    }
    nlohmann::json as = nlohmann::json::array();
    for (Action a : p.actions) as.push_back(std::string(to_string(a)));
    paths.push_back({{"agent", p.agent}, {"start_time", p.start_time}, {"cost", p.cost},
                     {"vertices", vs}, {"actions", as}});
  }
  return {{"map", map.name()},
          {"status", status},
          {"solved", status == "solved"},
          {"cost", s.cost},
          {"unit_cost", s.unit_cost},
          {"stats",
           {{"hl_expanded", s.stats.hl_expanded},
            {"hl_generated", s.stats.hl_generated},
            {"ll_searches", s.stats.ll_searches},
            {"ll_expanded", s.stats.ll_expanded}}},
          {"paths", paths}};
}

std::vector<TimedPath> paths_from_solution_json(const nlohmann::json& j, const GridMap& map) {
  std::vector<TimedPath> out;
  try {
    for (const auto& p : j.at("paths")) {
      TimedPath tp;
      tp.agent = p.value("agent", static_cast<int>(out.size()));
      tp.start_time = p.value("start_time", 0);
      tp.cost = p.value("cost", 0.0);
      for (const auto& v : p.at("vertices")) {
        const Vertex q{v.at(0).get<int>(), v.at(1).get<int>()};
        if (!map.in_bounds(q)) throw ConfigError("solution vertex outside the map");
        tp.vertices.push_back(map.index(q));
      }
      for (const auto& a : p.value("actions", nlohmann::json::array())) {
        const auto act = parse_action(a.get<std::string>());
        if (!act) throw ConfigError("unknown action '" + a.get<std::string>() + "'");
        tp.actions.push_back(*act);
      }
      if (tp.vertices.empty()) throw ConfigError("solution path without vertices");
      out.push_back(std::move(tp));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad solution file: ") + e.what());
  }
  return out;
}

nlohmann::json conflict_report_json(const ConflictReport& r, double radius_agent, double radius_ua) {
  nlohmann::json cs = nlohmann::json::array();
  for (const UAConflict& c : r.conflicts) {
    cs.push_back({{"agent", c.agent}, {"ua", c.ua}, {"time", c.time}, {"min_distance", c.min_distance}});
  }
  return {{"radius_agent", radius_agent},
          {"radius_ua", radius_ua},
          {"total", r.total},
          {"per_timestep", r.per_timestep},
          {"overlap_per_timestep", r.overlap_per_timestep},
          {"conflicts", cs}};
}

namespace {

// Flag value if given, else the config-file value, else the default.
class Settings {
 public:
  void load(const std::optional<std::string>& path) {
    if (!path) return;
    if (!fs::is_regular_file(*path)) throw ConfigError("config file not found: " + *path);
    try {
      doc_ = nlohmann::json::parse(read_text_file(*path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(*path + ": " + e.what());
    }
    if (!doc_.is_object()) throw ConfigError(*path + ": expected a JSON object");
  }

  template <class T>
  T get(const std::optional<T>& flag, const char* key, T def) const {
    if (flag) return *flag;
    if (doc_.contains(key)) {
      try {
        return doc_.at(key).get<T>();
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
      }
    }
    return def;
  }

  template <class T>
  std::optional<T> maybe(const std::optional<T>& flag, const char* key) const {
    if (flag) return flag;
    if (doc_.contains(key)) return get<T>(std::nullopt, key, T{});
    return std::nullopt;
  }

  const nlohmann::json& doc() const { return doc_; }

 private:
  nlohmann::json doc_ = nlohmann::json::object();
};

fs::path output_dir(const std::string& dir) {
  fs::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv); root && *root) p = fs::path(root) / p;
  }
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string require(const std::optional<std::string>& v, const char* what) {
  if (!v) throw ConfigError(std::string("missing required setting: ") + what);
  return *v;
}

fs::path existing(const std::string& p) {
  if (!fs::is_regular_file(p)) throw ConfigError("file not found: " + p);
  return p;
}

GridMap load_map(const std::string& path) { return load_map_file(existing(path)); }

FitConfig fit_config(const Settings& s, const std::optional<int>& min_obs,
                     const std::optional<int>& max_comp, const std::optional<std::uint64_t>& seed) {
  FitConfig c = s.doc().contains("fit") ? fit_config_from_json(s.doc().at("fit")) : FitConfig{};
  if (min_obs) c.min_observations = *min_obs;
  if (max_comp) c.max_components = *max_comp;
  if (seed) c.seed = *seed;
  if (c.min_observations < 1 || c.max_components < 1) throw ConfigError("fit settings must be positive");
  return c;
}

TrajectoryDataset read_dataset(const fs::path& p, std::ostream& err) {
  const std::string text = read_text_file(p);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    err << "warning: " << p.string() << " is empty; the motion map will have no models\n";
    return {};
  }
  return parse_trajectory_csv(text);
}

// Shared options of the commands that plan on a guidance graph.
struct GuidanceOptions {
  std::optional<std::string> cliffmap;
  std::optional<std::string> trajectories;
  std::optional<double> step_cost;
  std::optional<std::string> log_grouping;

  void add(CLI::App* app) {
    app->add_option("--cliffmap", cliffmap, "CliffMap JSON; plain MAPF weights when absent");
    app->add_option("--trajectories", trajectories, "trajectory CSV to fit a CliffMap from");
    app->add_option("--step-cost", step_cost, "uniform step cost g_s (default 1)");
    app->add_option("--log-grouping", log_grouping, "scale_sum (default) or log_of_product");
  }

  GuidanceGraph build(const GridMap& map, const Settings& s, std::ostream& err) const {
    const double gs = s.get(step_cost, "step_cost", 1.0);
    if (!(gs > 0.0)) throw ConfigError("step_cost must be positive");
    FlowCostConfig fc;
    const std::string grouping = s.get(log_grouping, "log_grouping", std::string("scale_sum"));
    if (grouping == "scale_sum") {
      fc.grouping = LogGrouping::scale_sum;
    } else if (grouping == "log_of_product") {
      fc.grouping = LogGrouping::log_of_product;
    } else {
      throw ConfigError("unknown log_grouping '" + grouping + "'");
    }
    CliffMap cm = CliffMap::empty(map);
    if (const auto p = s.maybe(cliffmap, "cliffmap")) {
      cm = load_cliffmap(read_text_file(existing(*p)));
    } else if (const auto t = s.maybe(trajectories, "trajectories")) {
      FitConfig fit = s.doc().contains("fit") ? fit_config_from_json(s.doc().at("fit")) : FitConfig{};
      cm = build_cliffmap(map, bin_observations(read_dataset(existing(*t), err), map), fit);
    }
    return build_guidance_graph(map, cm, gs, fc);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flow-aware multi-agent path finding toolkit", "famapf"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::optional<std::string> config;
  std::optional<std::string> out_dir;
  std::optional<std::string> map_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON file with settings; flags override it");
    sub->add_option("--out", out_dir, "output directory (relative paths resolve under $" +
                                          std::string(kOutputRootEnv) + " when set)");
  };

  // fit-mod
  auto* fit = app.add_subcommand("fit-mod", "fit a CliffMap from trajectories");
  std::optional<std::string> fit_csv;
  std::optional<int> fit_min_obs, fit_max_comp;
  std::optional<std::uint64_t> fit_seed;
  std::optional<double> fit_dt;
  common(fit);
  fit->add_option("--map", map_path, "movingai map file");
  fit->add_option("--trajectories", fit_csv, "trajectory CSV (traj_id,t,x,y)");
  fit->add_option("--min-observations", fit_min_obs);
  fit->add_option("--max-components", fit_max_comp);
  fit->add_option("--seed", fit_seed);
  fit->add_option("--dt", fit_dt, "resampling interval in seconds");

  // guidance-export
  auto* gex = app.add_subcommand("guidance-export", "write guidance graph weights as CSV/JSON/SVG");
  GuidanceOptions gopt;
  common(gex);
  gex->add_option("--map", map_path);
  gopt.add(gex);

  // solve
  auto* solve = app.add_subcommand("solve", "one-shot MAPF on the guidance graph");
  GuidanceOptions sopt;
  std::optional<std::string> scen_path, low_level, ua_config_path;
  std::optional<int> n_agents;
  std::optional<double> omega1, time_limit, radius_agent, radius_ua;
  std::optional<std::uint64_t> ua_seed;
  common(solve);
  solve->add_option("--map", map_path);
  solve->add_option("--scen", scen_path);
  solve->add_option("--agents", n_agents);
  solve->add_option("--omega1", omega1);
  solve->add_option("--time-limit", time_limit, "seconds");
  solve->add_option("--low-level", low_level, "astar or sipp");
  solve->add_option("--ua-config", ua_config_path, "UA config; counts conflicts with a one-shot stream");
  solve->add_option("--ua-seed", ua_seed);
  solve->add_option("--radius-agent", radius_agent);
  solve->add_option("--radius-ua", radius_ua);
  sopt.add(solve);

  // lifelong
  auto* life = app.add_subcommand("lifelong", "rolling-horizon lifelong simulation");
  GuidanceOptions lopt;
  std::optional<std::uint64_t> task_seed;
  std::optional<int> sim_time, replan_period, horizon;
  common(life);
  life->add_option("--map", map_path);
  life->add_option("--agents", n_agents);
  life->add_option("--task-seed", task_seed);
  life->add_option("--sim-time", sim_time);
  life->add_option("--replan-period", replan_period);
  life->add_option("--horizon", horizon);
  life->add_option("--omega1", omega1);
  life->add_option("--time-limit", time_limit, "per-iteration seconds");
  life->add_option("--low-level", low_level);
  life->add_option("--ua-config", ua_config_path);
  life->add_option("--ua-seed", ua_seed);
  life->add_option("--radius-agent", radius_agent);
  life->add_option("--radius-ua", radius_ua);
  lopt.add(life);

  // gen-uas
  auto* gen = app.add_subcommand("gen-uas", "generate UA trajectories (dataset or stream)");
  std::optional<std::string> gen_kind, gen_mode;
  std::optional<int> gen_n;
  common(gen);
  gen->add_option("--map", map_path);
  gen->add_option("--ua-config", ua_config_path);
  gen->add_option("--kind", gen_kind, "dataset or stream");
  gen->add_option("--n", gen_n, "dataset size");
  gen->add_option("--mode", gen_mode, "stream mode: oneshot or lifelong");
  gen->add_option("--sim-time", sim_time);
  gen->add_option("--ua-seed", ua_seed);

  // eval-conflicts
  auto* ev = app.add_subcommand("eval-conflicts", "count agent/UA conflicts");
  std::optional<std::string> sol_path, log_path, uas_path;
  std::optional<int> t_end;
  common(ev);
  ev->add_option("--map", map_path);
  ev->add_option("--solution", sol_path, "solution JSON from solve");
  ev->add_option("--log", log_path, "log JSONL from lifelong");
  ev->add_option("--uas", uas_path, "UA trajectory CSV");
  ev->add_option("--t-end", t_end, "evaluate agents up to this timestep");
  ev->add_option("--radius-agent", radius_agent);
  ev->add_option("--radius-ua", radius_ua);

  // bench
  auto* bench = app.add_subcommand("bench", "maps x variants x seeds experiment");
  std::optional<int> jobs;
  common(bench);
  bench->add_option("--jobs", jobs, "worker threads (default: all cores)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    Settings s;
    s.load(config);
    auto out_path = [&](const char* def) { return output_dir(s.get(out_dir, "output_dir", std::string(def))); };
    auto ua_config = [&]() -> std::optional<UAConfig> {
      std::optional<UAConfig> c;
      if (const auto p = s.maybe(ua_config_path, "ua_config_path")) {
        c = load_ua_config(existing(*p));
      } else if (s.doc().contains("ua_config")) {
        c = ua_config_from_json(s.doc().at("ua_config"));
      }
      if (c && ua_seed) c->seed = *ua_seed;
      return c;
    };

    if (*fit) {
      const GridMap map = load_map(require(s.maybe(map_path, "map"), "map"));
      const fs::path csv = existing(require(s.maybe(fit_csv, "trajectories"), "trajectories"));
      const FitConfig fc = fit_config(s, fit_min_obs, fit_max_comp, fit_seed);
      const double dt = s.get(fit_dt, "dt", kDefaultResampleDt);
      if (!(dt > 0.0)) throw ConfigError("dt must be positive");
      const TrajectoryDataset data = read_dataset(csv, err);
      const CellObservations binned = bin_observations(data, map, dt);
      CliffBuildReport rep;
      CliffMap cm = build_cliffmap(map, binned, fc, Execution::parallel, &rep);
      cm.map_name = map.name();
      const fs::path dir = out_path("fit-mod");
      write_file(dir / "cliffmap.json", save_cliffmap(cm));
      const nlohmann::json summary{{"map", map.name()},
                                   {"trajectories", data.size()},
                                   {"observations", binned.total()},
                                   {"dropped", binned.dropped},
                                   {"fitted_cells", rep.fitted},
                                   {"failed_cells", rep.failed},
                                   {"below_threshold_cells", rep.below_threshold},
                                   {"coverage", cm.coverage},
                                   {"dataset_hash", cm.dataset_hash}};
      write_file(dir / "coverage.json", summary.dump(2) + "\n");
      if (rep.fitted == 0) err << "warning: no cell reached the observation threshold\n";
      out << "fitted " << rep.fitted << " cells, coverage " << fmt(cm.coverage) << ", wrote "
          << (dir / "cliffmap.json").string() << '\n';
      return 0;
    }

    if (*gex) {
      const GridMap map = load_map(require(s.maybe(map_path, "map"), "map"));
      const GuidanceGraph gg = gopt.build(map, s, err);
      const fs::path dir = out_path("guidance");
      write_file(dir / "guidance.csv", guidance_csv(gg));
      write_file(dir / "guidance.json", guidance_json(gg).dump(1) + "\n");
      write_file(dir / "guidance.svg", guidance_svg(gg));
      out << "wrote guidance for " << map.name() << " to " << dir.string() << '\n';
      return 0;
    }

    if (*solve) {
      const GridMap map = load_map(require(s.maybe(map_path, "map"), "map"));
      const int n = s.get(n_agents, "agents", 0);
      if (n < 1) throw ConfigError("agents must be at least 1");
      const Scenario scen =
          parse_scen(read_text_file(existing(require(s.maybe(scen_path, "scen"), "scen"))), n, map);
      const GuidanceGraph gg = sopt.build(map, s, err);
      CbsConfig cc;
      cc.omega1 = s.get(omega1, "omega1", 1.2);
      cc.time_limit_s = s.get(time_limit, "time_limit_s", 5.0);
      cc.low_level = parse_low_level(s.get(low_level, "low_level", std::string("astar")));
      if (cc.omega1 < 1.0) throw ConfigError("omega1 must be at least 1");
      if (!(cc.time_limit_s > 0.0)) throw ConfigError("time limit must be positive");
      const SolveResult r = cbs_solve(gg, scen, cc);
      const fs::path dir = out_path("solve");
      write_file(dir / "solution.json", solution_to_json(map, r.solution, to_string(r.status)).dump(1) + "\n");
      write_file(dir / "stats.csv", "map,agents,omega1,status,solved,cost,unit_cost,hl_expanded\n" + map.name() +
                                        "," + std::to_string(n) + "," + fmt(cc.omega1) + "," +
                                        to_string(r.status) + "," + (r.solved() ? "1" : "0") + "," +
                                        fmt(r.solution.cost) + "," + std::to_string(r.solution.unit_cost) +
                                        "," + std::to_string(r.solution.stats.hl_expanded) + "\n");
      write_file(dir / "timing.json",
                 nlohmann::json{{"runtime_s", r.solution.stats.runtime_s}}.dump(2) + "\n");
      if (const auto ua = ua_config(); ua && r.solved()) {
        const auto stream = generate_stream(map, *ua, StreamMode::oneshot, 0);
        int te = 0;
        for (const TimedPath& p : r.solution.paths) te = std::max(te, p.length());
        const double ra = s.get(radius_agent, "radius_agent", kDefaultRadius);
        const double ru = s.get(radius_ua, "radius_ua", kDefaultRadius);
        const ConflictReport rep =
            count_conflicts(agent_tracks(map, r.solution.paths, te), ua_tracks(stream), ra, ru);
        write_file(dir / "conflicts.json", conflict_report_json(rep, ra, ru).dump(1) + "\n");
      }
      out << "solved=" << (r.solved() ? "true" : "false") << " status=" << to_string(r.status)
          << " cost=" << fmt(r.solution.cost) << " runtime_s=" << fmt(r.solution.stats.runtime_s) << '\n';
      return 0;
    }

    if (*life) {
      const GridMap map = load_map(require(s.maybe(map_path, "map"), "map"));
      const int n = s.get(n_agents, "agents", 0);
      if (n < 1) throw ConfigError("agents must be at least 1");
      SimulationConfig sc;
      sc.sim_time = s.get(sim_time, "sim_time", sc.sim_time);
      sc.replan_period = s.get(replan_period, "replan_period", sc.replan_period);
      sc.horizon = s.get(horizon, "horizon", sc.horizon);
      sc.omega1 = s.get(omega1, "omega1", sc.omega1);
      sc.time_limit_s = s.get(time_limit, "time_limit_s", sc.time_limit_s);
      sc.low_level = parse_low_level(s.get(low_level, "low_level", to_string(sc.low_level)));
      try {
        sc.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      const GuidanceGraph gg = lopt.build(map, s, err);
      const TaskQueue queue = generate_task_queue(map, n, s.get(task_seed, "task_seed", std::uint64_t{1}));
      const SimulationLog log = rhcr_run(gg, queue, sc);
      const fs::path dir = out_path("lifelong");
      write_file(dir / "log.jsonl", log_to_jsonl(log, map));
      std::optional<long> conflicts;
      if (const auto ua = ua_config()) {
        const auto stream = generate_stream(map, *ua, StreamMode::lifelong, sc.sim_time);
        std::vector<TimedPath> paths;
        for (int i = 0; i < log.agent_count(); ++i) paths.push_back(log.agent_path(gg, i));
        const double ra = s.get(radius_agent, "radius_agent", kDefaultRadius);
        const double ru = s.get(radius_ua, "radius_ua", kDefaultRadius);
        const ConflictReport rep =
            count_conflicts(agent_tracks(map, paths, sc.sim_time), ua_tracks(stream), ra, ru);
        conflicts = rep.total;
        write_file(dir / "conflicts.json", conflict_report_json(rep, ra, ru).dump(1) + "\n");
      }
      const Metrics m = compute_metrics(log, conflicts);
      nlohmann::json mj{{"throughput", m.throughput},
                        {"completed", m.completed},
                        {"iterations", m.iterations},
                        {"failed_iterations", m.failed_iterations}};
      if (m.ua_conflicts_per_timestep) mj["ua_conflicts_per_timestep"] = *m.ua_conflicts_per_timestep;
      write_file(dir / "metrics.json", mj.dump(2) + "\n");
      nlohmann::json runtimes = nlohmann::json::array();
      for (const IterationRecord& r : log.iterations) runtimes.push_back(r.runtime_s);
      write_file(dir / "timing.json",
                 nlohmann::json{{"mean_runtime_s", m.mean_runtime_s}, {"iteration_runtime_s", runtimes}}.dump(2) +
                     "\n");
      write_file(dir / "timing.jsonl", log_to_jsonl(log, map, true));
      out << "throughput=" << fmt(m.throughput) << " mean_runtime_s=" << fmt(m.mean_runtime_s)
          << " ua_conflicts_per_timestep="
          << (m.ua_conflicts_per_timestep ? fmt(*m.ua_conflicts_per_timestep) : std::string("n/a")) << '\n';
      return 0;
    }

    if (*gen) {
      const GridMap map = load_map(require(s.maybe(map_path, "map"), "map"));
      const auto ua = ua_config();
      if (!ua) throw ConfigError("missing required setting: ua-config");
      const std::string kind = s.get(gen_kind, "kind", std::string("dataset"));
      std::vector<UATrajectory> uas;
      if (kind == "dataset") {
        uas = generate_dataset(map, *ua, s.get(gen_n, "n", kDefaultDatasetSize));
      } else if (kind == "stream") {
        const StreamMode mode = parse_stream_mode(s.get(gen_mode, "mode", std::string("lifelong")));
        uas = generate_stream(map, *ua, mode, s.get(sim_time, "sim_time", 2000));
      } else {
        throw ConfigError("kind must be dataset or stream");
      }
      const fs::path dir = out_path("uas");
      write_file(dir / "uas.csv", to_trajectory_csv(to_dataset(uas)));
      out << "wrote " << uas.size() << " trajectories to " << (dir / "uas.csv").string() << '\n';
      return 0;
    }

    if (*ev) {
      const GridMap map = load_map(require(s.maybe(map_path, "map"), "map"));
      std::vector<TimedPath> paths;
      int te = 0;
      if (const auto sp = s.maybe(sol_path, "solution")) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(read_text_file(existing(*sp)));
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError(*sp + ": " + e.what());
        }
        paths = paths_from_solution_json(j, map);
        for (const TimedPath& p : paths) te = std::max(te, p.start_time + p.length());
      } else if (const auto lp = s.maybe(log_path, "log")) {
        std::istringstream in(read_text_file(existing(*lp)));
        std::string line;
        std::vector<std::vector<int>> steps;
        try {
          while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line);
            if (j.value("type", "") != "step") continue;
            std::vector<int> row;
            for (const auto& p : j.at("positions")) row.push_back(map.index(Vertex{p.at(0).get<int>(), p.at(1).get<int>()}));
            steps.push_back(std::move(row));
          }
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError(*lp + ": " + e.what());
        }
        if (steps.empty()) throw ConfigError(*lp + ": no step records");
        for (std::size_t a = 0; a < steps[0].size(); ++a) {
          TimedPath p;
          p.agent = static_cast<int>(a);
          for (const auto& row : steps) p.vertices.push_back(row.at(a));
          paths.push_back(std::move(p));
        }
        te = static_cast<int>(steps.size()) - 1;
      } else {
        throw ConfigError("missing required setting: solution or log");
      }
      te = s.get(t_end, "t_end", te);
      const auto uas = from_dataset(read_dataset(existing(require(s.maybe(uas_path, "uas"), "uas")), err));
      const double ra = s.get(radius_agent, "radius_agent", kDefaultRadius);
      const double ru = s.get(radius_ua, "radius_ua", kDefaultRadius);
      const ConflictReport rep = count_conflicts(agent_tracks(map, paths, te), ua_tracks(uas), ra, ru);
      const fs::path dir = out_path("conflicts");
      write_file(dir / "conflicts.json", conflict_report_json(rep, ra, ru).dump(1) + "\n");
      out << "conflicts=" << rep.total << '\n';
      return 0;
    }

    if (*bench) {
      if (!config) throw ConfigError("bench needs --config");
      ExperimentConfig ec = experiment_from_json(s.doc());
      if (jobs) ec.jobs = *jobs;
      if (out_dir) ec.output_dir = *out_dir;
      ec.validate();
      const Report rep = run_experiment(ec);
      const fs::path dir = output_dir(ec.output_dir.string());
      write_file(dir / "report.csv", report_csv(rep));
      write_file(dir / "report.json", report_json(rep).dump(1) + "\n");
      write_file(dir / "timing.csv", timing_csv(rep));
      std::vector<std::string> cats;
      std::vector<Series> tp, cf, rt;
      for (Variant v : ec.variants) {
        tp.push_back({to_string(v), {}});
        cf.push_back({to_string(v), {}});
        rt.push_back({to_string(v), {}});
      }
      for (const Aggregate& a : rep.aggregates) {
        if (std::find(cats.begin(), cats.end(), a.map) == cats.end()) cats.push_back(a.map);
        const std::size_t k = static_cast<std::size_t>(
            std::find(ec.variants.begin(), ec.variants.end(), a.variant) - ec.variants.begin());
        tp[k].values.push_back(a.throughput_mean);
        cf[k].values.push_back(a.conflicts_mean);
        rt[k].values.push_back(a.runtime_mean);
      }
      write_file(dir / "throughput.svg", bar_chart_svg("Throughput", cats, tp, "tasks / timestep"));
      write_file(dir / "conflicts.svg", bar_chart_svg("UA conflicts", cats, cf, "conflicts"));
      write_file(dir / "timing_runtime.svg", bar_chart_svg("Runtime", cats, rt, "seconds"));
      int failed = 0;
      for (const RunRow& r : rep.rows) failed += r.ok ? 0 : 1;
      out << rep.rows.size() << " runs (" << failed << " failed), report in " << dir.string() << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace famapf::cli
