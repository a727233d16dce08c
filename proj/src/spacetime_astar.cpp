#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "famapf/detail/focal_queue.hpp"
#include "famapf/lowlevel.hpp"

namespace famapf {

namespace detail {

ChainHeuristic::ChainHeuristic(const LowLevelQuery& q) : goals_(q.goals), tables_(q.heuristics) {
  if (goals_.empty()) throw std::invalid_argument("low-level query needs at least one goal");
  if (tables_.size() != goals_.size()) {
    throw std::invalid_argument("low-level query needs one heuristic table per goal");
  }
  for (std::size_t i = 0; i < goals_.size(); ++i) {
    if (tables_[i] == nullptr || tables_[i]->goal() != goals_[i]) {
      throw std::invalid_argument("heuristic table does not match its goal");
    }
  }
  const std::size_t n = goals_.size();
  rest_.assign(n, 0.0);
  for (std::size_t k = n - 1; k-- > 0;) rest_[k] = rest_[k + 1] + (*tables_[k + 1])[goals_[k]];
}

double ChainHeuristic::operator()(int v, int k) const {
  const int n = goal_count();
  if (k >= n) return (*tables_.back())[v];
  return (*tables_[static_cast<std::size_t>(k)])[v] + rest_[static_cast<std::size_t>(k)];
}

int ChainHeuristic::advance(int v, int k) const {
  while (k < goal_count() && goal(k) == v) ++k;
  return k;
}

TimedPath assemble_path(std::vector<int> vertices, std::vector<Action> actions) {
  TimedPath p;
  p.vertices = std::move(vertices);
  p.actions = std::move(actions);
  return p;
}

}  // namespace detail

namespace {

struct Node {
  int v = 0;
  int t = 0;
  int k = 0;
  double g = 0.0;
  double h = 0.0;
  int conflicts = 0;
  std::uint64_t id = 0;
  Node* parent = nullptr;
  Action action = Action::Wait;
  bool in_open = false;
  bool in_focal = false;
  bool terminal = false;

  double f() const { return g + h; }
  double open_key() const { return f(); }
  double focal_key() const { return f(); }
};

struct OpenLess {
  bool operator()(const Node* a, const Node* b) const {
    if (a->f() != b->f()) return a->f() < b->f();
    if (a->g != b->g) return a->g > b->g;
    return a->id < b->id;
  }
};

struct FocalLess {
  bool operator()(const Node* a, const Node* b) const {
    if (a->conflicts != b->conflicts) return a->conflicts < b->conflicts;
    if (a->f() != b->f()) return a->f() < b->f();
    if (a->g != b->g) return a->g > b->g;
    return a->id < b->id;
  }
};

struct StateKey {
  int v, t, k;
  bool operator==(const StateKey&) const = default;
};

struct StateHash {
  std::size_t operator()(const StateKey& s) const {
    std::uint64_t x = static_cast<std::uint32_t>(s.v);
    x = x * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(s.t);
    x = x * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(s.k);
    return static_cast<std::size_t>(x ^ (x >> 29));
  }
};

}  // namespace

LowLevelResult spacetime_astar(const LowLevelQuery& q) {
  if (q.graph == nullptr) throw std::invalid_argument("low-level query has no graph");
  const GuidanceGraph& gg = *q.graph;
  const detail::ChainHeuristic chain(q);
  static const ReservationTable kNoReservations;
  const ReservationTable& res = q.reservations ? *q.reservations : kNoReservations;
  const ConflictAvoidanceTable* cat = q.avoid;
  const int last_goal = chain.goal(chain.goal_count() - 1);
  const int n_goals = chain.goal_count();

  // beyond t_cap nothing is time dependent, so states collapse onto it
  const int t_cap = q.horizon ? *q.horizon
                              : std::max(res.last_time(), cat ? cat->max_time() : -1) + 1;
  const int goal_free_after = res.last_vertex_time(last_goal);

  LowLevelResult out;
  std::vector<std::unique_ptr<Node>> pool;
  std::unordered_map<StateKey, Node*, StateHash> seen;
  detail::FocalQueue<Node, OpenLess, FocalLess> queue(std::max(1.0, q.omega1));

  auto is_terminal = [&](const Node& n) {
    if (q.horizon && n.t >= *q.horizon) return true;
    return n.k >= n_goals && n.v == last_goal && n.t > goal_free_after;
  };

  auto make = [&](int v, int t, int k, double g, int conflicts, Node* parent, Action a) {
    const double h = chain(v, k);
    if (h == kInfinity) return;
    const StateKey key{v, std::min(t, t_cap), k};
    auto it = seen.find(key);
    Node* node = nullptr;
    if (it != seen.end()) {
      node = it->second;
      const bool better = g < node->g - 1e-12 ||
                          (g <= node->g + 1e-12 && conflicts < node->conflicts && node->in_open);
      if (!better) return;
      // expanded nodes may be parents of others, so a fresh node replaces the entry
      queue.erase(node);
    }
    pool.push_back(std::make_unique<Node>());
    node = pool.back().get();
    seen[key] = node;
    node->v = v;
    node->t = t;
    node->k = k;
    node->g = g;
    node->h = h;
    node->conflicts = conflicts;
    node->parent = parent;
    node->action = a;
    node->id = out.generated++;
    node->terminal = is_terminal(*node);
    queue.push(node);
  };

  if (res.vertex_blocked(q.start, 0)) {
    out.status = SearchStatus::no_path;
    return out;
  }
  make(q.start, 0, chain.advance(q.start, 0), 0.0, 0, nullptr, Action::Wait);
  if (queue.empty()) {
    out.status = SearchStatus::no_path;
    return out;
  }

  while (!queue.empty()) {
    if ((out.expanded & 255) == 0 && q.deadline.expired()) {
      out.status = SearchStatus::timeout;
      return out;
    }
    if (q.node_limit != 0 && out.expanded >= q.node_limit) {
      out.status = SearchStatus::node_limit;
      return out;
    }
    Node* cur = queue.pop();
    out.lower_bound = queue.lower_bound();
    if (cur->terminal) {
      std::vector<int> vs;
      std::vector<Action> as;
      for (Node* n = cur; n != nullptr; n = n->parent) {
        vs.push_back(n->v);
        if (n->parent) as.push_back(n->action);
      }
      std::reverse(vs.begin(), vs.end());
      std::reverse(as.begin(), as.end());
      out.path = detail::assemble_path(std::move(vs), std::move(as));
      out.path.cost = q.horizon && cur->t >= *q.horizon ? cur->f() : cur->g;
      out.status = SearchStatus::found;
      return out;
    }
    ++out.expanded;
    for (Action a : kAllActions) {
      const int u = gg.target(cur->v, a);
      if (u < 0) continue;
      const int t = cur->t + 1;
      if (res.vertex_blocked(u, t) || res.edge_blocked(cur->v, u, t)) continue;
      int c = cur->conflicts;
      if (cat) {
        c += cat->vertex_count(u, t);
        if (u != cur->v) c += cat->edge_count(cur->v, u, t);
      }
      make(u, t, chain.advance(u, cur->k), cur->g + gg.weight(cur->v, a), c, cur, a);
    }
  }
  out.status = SearchStatus::no_path;
  return out;
}

LowLevelResult spacetime_astar(const GuidanceGraph& gg, int start, int goal,
                               const std::vector<Constraint>& constraints, const HeuristicTable& h,
                               double omega1, std::optional<int> horizon) {
  ReservationTable res;
  for (const Constraint& c : constraints) res.add(c);
  LowLevelQuery q;
  q.graph = &gg;
  q.start = start;
  q.goals = {goal};
  q.heuristics = {&h};
  q.reservations = &res;
  q.omega1 = omega1;
  q.horizon = horizon;
  return spacetime_astar(q);
}

}  // namespace famapf
