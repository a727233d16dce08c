#include "famapf/cbs.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <stdexcept>

#include "famapf/conflicts.hpp"
#include "famapf/detail/focal_queue.hpp"

namespace famapf {

std::string to_string(LowLevelKind k) { return k == LowLevelKind::astar ? "astar" : "sipp"; }

LowLevelKind parse_low_level(const std::string& s) {
  if (s == "astar") return LowLevelKind::astar;
  if (s == "sipp") return LowLevelKind::sipp;
  throw std::invalid_argument("unknown low-level solver '" + s + "' (expected astar or sipp)");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved: return "solved";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::timeout: return "timeout";
    case SolveStatus::node_limit: return "node_limit";
  }
  return "unknown";
}

LowLevelResult plan_agent(const GuidanceGraph& gg, const MapfAgent& agent, HeuristicCache& cache,
                          const ReservationTable& reservations, const ConflictAvoidanceTable* cat,
                          const CbsConfig& cfg, Deadline deadline) {
  LowLevelQuery q;
  q.graph = &gg;
  q.start = agent.start;
  q.goals = agent.goals;
  for (int g : agent.goals) q.heuristics.push_back(&cache.get(g));
  q.reservations = &reservations;
  q.avoid = cat;
  q.omega1 = cfg.omega1;
  q.horizon = cfg.horizon;
  q.deadline = deadline;
  return cfg.low_level == LowLevelKind::astar ? spacetime_astar(q) : sipp(q);
}

namespace {

using PathPtr = std::shared_ptr<const TimedPath>;

struct HlNode {
  std::vector<Constraint> constraints;
  std::vector<PathPtr> paths;
  std::vector<double> lbs;
  double cost = 0.0;
  double lb = 0.0;
  std::vector<AgentConflict> conflicts;
  std::uint64_t id = 0;
  bool in_open = false;
  bool in_focal = false;

  double open_key() const { return lb; }
  double focal_key() const { return cost; }
};

struct OpenLess {
  bool operator()(const HlNode* a, const HlNode* b) const {
    if (a->lb != b->lb) return a->lb < b->lb;
    return a->id < b->id;
  }
};

struct FocalLess {
  bool operator()(const HlNode* a, const HlNode* b) const {
    if (a->conflicts.size() != b->conflicts.size()) return a->conflicts.size() < b->conflicts.size();
    if (a->cost != b->cost) return a->cost < b->cost;
    return a->id < b->id;
  }
};

class Solver {
 public:
  Solver(const GuidanceGraph& gg, const MapfProblem& problem, const CbsConfig& cfg,
         HeuristicCache& cache)
      : gg_(gg), problem_(problem), cfg_(cfg), cache_(cache),
        deadline_(Deadline::after(cfg.time_limit_s)), queue_(std::max(1.0, cfg.omega1)) {}

  SolveResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult r = search();
    r.solution.stats = stats_;
    r.solution.stats.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }

 private:
  std::vector<TimedPath> materialise(const HlNode& n) const {
    std::vector<TimedPath> out;
    out.reserve(n.paths.size());
    for (std::size_t i = 0; i < n.paths.size(); ++i) {
      out.push_back(*n.paths[i]);
      out.back().agent = static_cast<int>(i);
    }
    return out;
  }

  void evaluate(HlNode& n) {
    std::vector<TimedPath> view = materialise(n);
    n.conflicts = detect_conflicts(view, cfg_.horizon);
    n.cost = 0.0;
    n.lb = 0.0;
    for (std::size_t i = 0; i < n.paths.size(); ++i) {
      n.cost += n.paths[i]->cost;
      n.lb += n.lbs[i];
    }
    if (!best_ || n.conflicts.size() < best_conflicts_.size()) {
      best_ = true;
      best_paths_ = std::move(view);
      best_conflicts_ = n.conflicts;
    }
  }

  // Replans agent i of n in place. Returns the low-level status.
  SearchStatus replan(HlNode& n, int i) {
    ReservationTable res = problem_.obstacles;
    for (const Constraint& c : n.constraints) {
      if (c.agent == i) res.add(c);
    }
    ConflictAvoidanceTable cat;
    for (std::size_t j = 0; j < n.paths.size(); ++j) {
      if (static_cast<int>(j) != i && n.paths[j]) cat.add_path(*n.paths[j]);
    }
    const LowLevelResult r = plan_agent(gg_, problem_.agents[static_cast<std::size_t>(i)], cache_,
                                        res, &cat, cfg_, deadline_);
    ++stats_.ll_searches;
    stats_.ll_expanded += r.expanded;
    if (r.found()) {
      auto p = std::make_shared<TimedPath>(r.path);
      p->agent = i;
      const std::size_t k = static_cast<std::size_t>(i);
      n.lbs[k] = std::max(n.lbs[k], std::min(r.lower_bound, p->cost));
      n.paths[k] = std::move(p);
    }
    return r.status;
  }

  SolveResult fail(SolveStatus s, std::string reason) {
    SolveResult r;
    r.status = s;
    r.reason = std::move(reason);
    r.best_effort = best_paths_;
    r.best_effort_conflicts = best_conflicts_;
    return r;
  }

  static SolveStatus from_search(SearchStatus s) {
    return s == SearchStatus::timeout ? SolveStatus::timeout : SolveStatus::node_limit;
  }

  SolveResult search() {
    const int n_agents = static_cast<int>(problem_.agents.size());
    for (const MapfAgent& a : problem_.agents) {
      if (a.goals.empty()) throw std::invalid_argument("every agent needs at least one goal");
      for (int g : a.goals) {
        if (!gg_.map().passable(g)) throw std::invalid_argument("agent goal is not passable");
      }
      if (!gg_.map().passable(a.start)) throw std::invalid_argument("agent start is not passable");
    }

    auto root = std::make_unique<HlNode>();
    root->paths.resize(static_cast<std::size_t>(n_agents));
    root->lbs.assign(static_cast<std::size_t>(n_agents), 0.0);
    for (int i = 0; i < n_agents; ++i) {
      const SearchStatus s = replan(*root, i);
      if (s == SearchStatus::no_path) {
        return fail(SolveStatus::infeasible, "agent " + std::to_string(i) + " has no path");
      }
      if (s != SearchStatus::found) {
        return fail(from_search(s), "root planning stopped for agent " + std::to_string(i));
      }
    }
    root->id = next_id_++;
    evaluate(*root);
    ++stats_.hl_generated;
    queue_.push(root.get());
    nodes_.push_back(std::move(root));

    while (!queue_.empty()) {
      if (deadline_.expired()) return fail(SolveStatus::timeout, "time limit reached");
      if (cfg_.max_hl_nodes != 0 && stats_.hl_expanded >= cfg_.max_hl_nodes) {
        return fail(SolveStatus::node_limit, "high-level node limit reached");
      }
      HlNode* cur = queue_.pop();
      if (cur->conflicts.empty()) {
        SolveResult r;
        r.status = SolveStatus::solved;
        r.solution.paths = materialise(*cur);
        r.solution.cost = cur->cost;
        r.solution.unit_cost = 0;
        for (const TimedPath& p : r.solution.paths) r.solution.unit_cost += p.length();
        r.best_effort = r.solution.paths;
        return r;
      }
      ++stats_.hl_expanded;
      const AgentConflict& c = cur->conflicts.front();
      Constraint split[2];
      if (c.kind == ConflictKind::vertex) {
        split[0] = {ConflictKind::vertex, c.a1, c.v1, c.v1, c.t};
        split[1] = {ConflictKind::vertex, c.a2, c.v1, c.v1, c.t};
      } else {
        split[0] = {ConflictKind::edge, c.a1, c.v1, c.v2, c.t};
        split[1] = {ConflictKind::edge, c.a2, c.v2, c.v1, c.t};
      }
      for (const Constraint& con : split) {
        auto child = std::make_unique<HlNode>();
        child->constraints = cur->constraints;
        child->constraints.push_back(con);
        child->paths = cur->paths;
        child->lbs = cur->lbs;
        const SearchStatus s = replan(*child, con.agent);
        if (s == SearchStatus::no_path) continue;
        if (s != SearchStatus::found) return fail(from_search(s), "low-level search stopped");
        child->id = next_id_++;
        evaluate(*child);
        ++stats_.hl_generated;
        queue_.push(child.get());
        nodes_.push_back(std::move(child));
      }
    }
    return fail(SolveStatus::infeasible, "constraint tree exhausted");
  }

  const GuidanceGraph& gg_;
  const MapfProblem& problem_;
  const CbsConfig& cfg_;
  HeuristicCache& cache_;
  Deadline deadline_;
  detail::FocalQueue<HlNode, OpenLess, FocalLess> queue_;
  std::vector<std::unique_ptr<HlNode>> nodes_;
  std::uint64_t next_id_ = 0;
  SolverStats stats_;
  bool best_ = false;
  std::vector<TimedPath> best_paths_;
  std::vector<AgentConflict> best_conflicts_;
};

}  // namespace

SolveResult cbs_solve(const GuidanceGraph& gg, const MapfProblem& problem, const CbsConfig& cfg,
                      HeuristicCache* cache) {
  if (cfg.omega1 < 1.0) throw std::invalid_argument("omega1 must be at least 1");
  if (cfg.time_limit_s <= 0.0) throw std::invalid_argument("time limit must be positive");
  HeuristicCache local(gg);
  Solver s(gg, problem, cfg, cache ? *cache : local);
  return s.run();
}

SolveResult cbs_solve(const GuidanceGraph& gg, const Scenario& scenario, const CbsConfig& cfg,
                      HeuristicCache* cache) {
  MapfProblem p;
  for (const AgentTask& t : scenario.agents) {
    p.agents.push_back({gg.map().index(t.start), {gg.map().index(t.goal)}});
  }
  return cbs_solve(gg, p, cfg, cache);
}

}  // namespace famapf
