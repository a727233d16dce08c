#include "famapf/lifelong.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <json.hpp>
#include <queue>
#include <set>
#include <stdexcept>

#include "famapf/conflicts.hpp"
#include "famapf/rng.hpp"

namespace famapf {

namespace {

std::vector<int> reachable_from(const GridMap& map, int start) {
  std::vector<char> seen(static_cast<std::size_t>(map.size()), 0);
  std::vector<int> out;
  std::queue<int> open;
  seen[static_cast<std::size_t>(start)] = 1;
  open.push(start);
  while (!open.empty()) {
    const int v = open.front();
    open.pop();
    out.push_back(v);
    for (const Transition& tr : neighbors(map, map.vertex(v))) {
      const int u = map.index(tr.target);
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        open.push(u);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int manhattan(const GridMap& map, int a, int b) {
  const Vertex va = map.vertex(a);
  const Vertex vb = map.vertex(b);
  return std::abs(va.x - vb.x) + std::abs(va.y - vb.y);
}

void reserve_path(ReservationTable& res, const TimedPath& p, int window) {
  for (int t = 0; t <= window; ++t) res.block_vertex(p.at(t), t);
  for (int t = 1; t <= window; ++t) {
    const int from = p.at(t - 1);
    const int to = p.at(t);
    if (from != to) res.block_edge(to, from, t);
  }
}

TimedPath rest_path(int agent, int v) {
  TimedPath p;
  p.agent = agent;
  p.vertices = {v};
  return p;
}

}  // namespace

TaskQueue generate_task_queue(const GridMap& map, int agents, std::uint64_t seed,
                              int tasks_per_agent) {
  if (agents < 1) throw std::invalid_argument("agent count must be at least 1");
  if (tasks_per_agent < 1) throw std::invalid_argument("tasks per agent must be at least 1");
  std::vector<int> cells = map.passable_indices();
  if (static_cast<int>(cells.size()) < agents) {
    throw std::invalid_argument("map has fewer passable cells than agents");
  }
  Rng rng(seed, 0x7A5C);
  TaskQueue q;
  // partial Fisher-Yates for distinct starts
  for (int i = 0; i < agents; ++i) {
    const int j = i + rng.below(static_cast<int>(cells.size()) - i);
    std::swap(cells[static_cast<std::size_t>(i)], cells[static_cast<std::size_t>(j)]);
    q.starts.push_back(cells[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < agents; ++i) {
    const std::vector<int> pool = reachable_from(map, q.starts[static_cast<std::size_t>(i)]);
    std::vector<int> goals;
    int prev = q.starts[static_cast<std::size_t>(i)];
    if (pool.size() < 2) {
      goals.assign(static_cast<std::size_t>(tasks_per_agent), prev);
    } else {
      while (static_cast<int>(goals.size()) < tasks_per_agent) {
        const int g = pool[static_cast<std::size_t>(rng.below(static_cast<int>(pool.size())))];
        if (g == prev) continue;
        goals.push_back(g);
        prev = g;
      }
    }
    q.goals.push_back(std::move(goals));
  }
  return q;
}

void SimulationConfig::validate() const {
  if (replan_period < 1) throw std::invalid_argument("replan period must be at least 1");
  if (replan_period > horizon) throw std::invalid_argument("replan period must not exceed horizon");
  if (sim_time < replan_period) throw std::invalid_argument("sim_time must be at least the replan period");
  if (omega1 < 1.0) throw std::invalid_argument("omega1 must be at least 1");
  if (!(time_limit_s > 0.0)) throw std::invalid_argument("time limit must be positive");
}

TimedPath SimulationLog::agent_path(const GuidanceGraph& gg, int agent) const {
  TimedPath p;
  p.agent = agent;
  for (std::size_t t = 0; t < positions.size(); ++t) {
    const int v = positions[t][static_cast<std::size_t>(agent)];
    if (t > 0) {
      const int u = p.vertices.back();
      Action act = Action::Wait;
      for (Action a : kAllActions) {
        if (gg.target(u, a) == v) {
          act = a;
          break;
        }
      }
      p.actions.push_back(act);
      p.cost += gg.weight(u, act);
    }
    p.vertices.push_back(v);
  }
  return p;
}

SimulationLog rhcr_run(const GuidanceGraph& gg, const TaskQueue& queue, const SimulationConfig& cfg,
                       HeuristicCache* cache) {
  cfg.validate();
  const GridMap& map = gg.map();
  const int n = queue.agent_count();
  if (static_cast<int>(queue.goals.size()) != n) {
    throw std::invalid_argument("task queue needs a goal list per agent");
  }
  HeuristicCache local(gg);
  HeuristicCache& hc = cache ? *cache : local;

  CbsConfig cbs;
  cbs.omega1 = cfg.omega1;
  cbs.time_limit_s = cfg.time_limit_s;
  cbs.horizon = cfg.horizon;
  cbs.low_level = cfg.low_level;

  SimulationLog log;
  log.sim_time = cfg.sim_time;
  std::vector<int> pos = queue.starts;
  std::vector<std::size_t> next(static_cast<std::size_t>(n), 0);
  log.positions.push_back(pos);

  auto complete_arrivals = [&](int t) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      const auto& goals = queue.goals[k];
      while (next[k] < goals.size() && goals[next[k]] == pos[k]) {
        log.completions.push_back({i, goals[next[k]], t});
        ++next[k];
      }
    }
  };
  complete_arrivals(0);

  int t = 0;
  while (t < cfg.sim_time) {
    const auto t0 = std::chrono::steady_clock::now();
    MapfProblem problem;
    for (int i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      MapfAgent a;
      a.start = pos[k];
      int dist = 0;
      int prev = pos[k];
      for (std::size_t j = next[k]; j < queue.goals[k].size() && dist < cfg.horizon; ++j) {
        a.goals.push_back(queue.goals[k][j]);
        dist += manhattan(map, prev, queue.goals[k][j]);
        prev = queue.goals[k][j];
      }
      if (a.goals.empty()) a.goals.push_back(pos[k]);
      problem.agents.push_back(std::move(a));
    }

    IterationRecord rec;
    rec.start_time = t;
    SolveResult sr = cbs_solve(gg, problem, cbs, &hc);
    rec.status = sr.status;
    std::vector<TimedPath> plan;
    if (sr.solved()) {
      plan = std::move(sr.solution.paths);
      rec.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } else {
      rec.feasible = false;
      rec.runtime_s = cfg.time_limit_s;
      std::set<int> frozen;
      if (sr.best_effort.size() != static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i) frozen.insert(i);
        plan.clear();
        for (int i = 0; i < n; ++i) plan.push_back(rest_path(i, pos[static_cast<std::size_t>(i)]));
      } else {
        plan = std::move(sr.best_effort);
        for (const AgentConflict& c : sr.best_effort_conflicts) {
          frozen.insert(c.a1);
          frozen.insert(c.a2);
        }
      }
      const Deadline repair = Deadline::after(cfg.time_limit_s);
      bool changed = true;
      while (changed) {
        changed = false;
        for (int f : frozen) plan[static_cast<std::size_t>(f)] = rest_path(f, pos[static_cast<std::size_t>(f)]);
        for (int i = 0; i < n && !changed; ++i) {
          if (frozen.contains(i)) continue;
          bool hits = false;
          for (int s = 0; s <= cfg.horizon && !hits; ++s) {
            const int v = plan[static_cast<std::size_t>(i)].at(s);
            for (int f : frozen) {
              if (pos[static_cast<std::size_t>(f)] == v) {
                hits = true;
                break;
              }
            }
          }
          if (!hits) continue;
          ReservationTable res;
          for (int j = 0; j < n; ++j) {
            if (j != i) reserve_path(res, plan[static_cast<std::size_t>(j)], cfg.horizon);
          }
          const LowLevelResult r =
              plan_agent(gg, problem.agents[static_cast<std::size_t>(i)], hc, res, nullptr, cbs, repair);
          if (r.found()) {
            plan[static_cast<std::size_t>(i)] = r.path;
            plan[static_cast<std::size_t>(i)].agent = i;
          } else {
            frozen.insert(i);
            changed = true;
          }
        }
      }
      rec.frozen.assign(frozen.begin(), frozen.end());
    }
    log.iterations.push_back(std::move(rec));

    for (int s = 1; s <= cfg.replan_period && t < cfg.sim_time; ++s) {
      ++t;
      for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(i)] = plan[static_cast<std::size_t>(i)].at(s);
      log.positions.push_back(pos);
      complete_arrivals(t);
    }
  }
  return log;
}

Metrics compute_metrics(const SimulationLog& log, std::optional<long> ua_conflicts) {
  Metrics m;
  m.completed = static_cast<int>(log.completions.size());
  m.iterations = static_cast<int>(log.iterations.size());
  m.throughput = log.sim_time > 0 ? static_cast<double>(m.completed) / log.sim_time : 0.0;
  double total = 0.0;
  for (const IterationRecord& r : log.iterations) {
    total += r.runtime_s;
    if (!r.feasible) ++m.failed_iterations;
  }
  m.mean_runtime_s = m.iterations > 0 ? total / m.iterations : 0.0;
  if (ua_conflicts && log.sim_time > 0) {
    m.ua_conflicts_per_timestep = static_cast<double>(*ua_conflicts) / log.sim_time;
  }
  return m;
}

std::string log_to_jsonl(const SimulationLog& log, const GridMap& map, bool with_timing) {
  std::string out;
  for (std::size_t t = 0; t < log.positions.size(); ++t) {
    nlohmann::json pts = nlohmann::json::array();
    for (int v : log.positions[t]) {
      const Vertex p = map.vertex(v);
      pts.push_back({p.x, p.y});
    }
    nlohmann::json done = nlohmann::json::array();
    for (const TaskCompletion& c : log.completions) {
      if (c.time == static_cast<int>(t)) done.push_back(c.agent);
    }
    out += nlohmann::json{{"type", "step"}, {"t", t}, {"positions", pts}, {"completed", done}}.dump();
    out += '\n';
  }
  for (const IterationRecord& r : log.iterations) {
    nlohmann::json j{{"type", "iteration"},
                     {"start", r.start_time},
                     {"feasible", r.feasible},
                     {"status", to_string(r.status)},
                     {"frozen", r.frozen}};
    if (with_timing) j["runtime_s"] = r.runtime_s;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace famapf
