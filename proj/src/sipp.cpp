#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "famapf/detail/focal_queue.hpp"
#include "famapf/lowlevel.hpp"

namespace famapf {

namespace {

struct Label {
  int v = 0;
  int interval = 0;
  int k = 0;
  int t = 0;  // arrival time
  double g = 0.0;
  double h = 0.0;
  int conflicts = 0;
  std::uint64_t id = 0;
  Label* parent = nullptr;
  Action action = Action::Wait;  // move into v; Wait marks a pure wait from the parent
  bool in_open = false;
  bool in_focal = false;
  bool terminal = false;
  bool dead = false;

  double f() const { return g + h; }
  double open_key() const { return f(); }
  double focal_key() const { return f(); }
};

struct OpenLess {
  bool operator()(const Label* a, const Label* b) const {
    if (a->f() != b->f()) return a->f() < b->f();
    if (a->g != b->g) return a->g > b->g;
    return a->id < b->id;
  }
};

struct FocalLess {
  bool operator()(const Label* a, const Label* b) const {
    if (a->conflicts != b->conflicts) return a->conflicts < b->conflicts;
    if (a->f() != b->f()) return a->f() < b->f();
    if (a->g != b->g) return a->g > b->g;
    return a->id < b->id;
  }
};

struct LabelKey {
  int v, interval, k;
  bool operator==(const LabelKey&) const = default;
};

struct LabelHash {
  std::size_t operator()(const LabelKey& s) const {
    std::uint64_t x = static_cast<std::uint32_t>(s.v);
    x = x * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(s.interval);
    x = x * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(s.k);
    return static_cast<std::size_t>(x ^ (x >> 29));
  }
};

}  // namespace

LowLevelResult sipp(const LowLevelQuery& q) {
  if (q.graph == nullptr) throw std::invalid_argument("low-level query has no graph");
  const GuidanceGraph& gg = *q.graph;
  const detail::ChainHeuristic chain(q);
  static const ReservationTable kNoReservations;
  const ReservationTable& res = q.reservations ? *q.reservations : kNoReservations;
  const ConflictAvoidanceTable* cat = q.avoid;
  const int last_goal = chain.goal(chain.goal_count() - 1);
  const int n_goals = chain.goal_count();
  const std::int64_t horizon = q.horizon ? *q.horizon : std::int64_t{kForever};
  const std::int64_t t_last = res.last_time();

  std::unordered_map<int, std::vector<SafeInterval>> interval_cache;
  auto intervals = [&](int v) -> const std::vector<SafeInterval>& {
    auto it = interval_cache.find(v);
    if (it == interval_cache.end()) it = interval_cache.emplace(v, res.safe_intervals(v)).first;
    return it->second;
  };
  auto wait_conflicts = [&](int v, int from, int to) {
    int c = 0;
    if (cat) {
      for (int tau = from; tau <= to; ++tau) c += cat->vertex_count(v, tau);
    }
    return c;
  };

  LowLevelResult out;
  std::vector<std::unique_ptr<Label>> pool;
  std::unordered_map<LabelKey, std::vector<Label*>, LabelHash> labels;
  detail::FocalQueue<Label, OpenLess, FocalLess> queue(std::max(1.0, q.omega1));

  auto push_terminal = [&](int v, int t, int k, double g, int conflicts, Label* parent, Action a) {
    const double h = chain(v, k);
    if (h == kInfinity) return;
    pool.push_back(std::make_unique<Label>());
    Label* n = pool.back().get();
    *n = Label{};
    n->v = v;
    n->t = t;
    n->k = k;
    n->g = g;
    n->h = h;
    n->conflicts = conflicts;
    n->parent = parent;
    n->action = a;
    n->terminal = true;
    n->id = out.generated++;
    queue.push(n);
  };

  auto push_label = [&](int v, int iv, int t, int k, double g, int conflicts, Label* parent,
                        Action a) {
    const double h = chain(v, k);
    if (h == kInfinity) return;
    const std::vector<SafeInterval>& ivs = intervals(v);
    const bool final_interval = ivs[static_cast<std::size_t>(iv)].hi == kForever;
    if ((q.horizon && t >= *q.horizon) || (k >= n_goals && v == last_goal && final_interval)) {
      push_terminal(v, t, k, g, conflicts, parent, a);
      return;
    }
    const double w = gg.weight(v, Action::Wait);
    auto& bucket = labels[LabelKey{v, iv, k}];
    for (const Label* l : bucket) {
      if (l->t <= t && l->g + (t - l->t) * w <= g + 1e-12) return;
    }
    std::erase_if(bucket, [&](Label* l) {
      if (t <= l->t && g + (l->t - t) * w <= l->g + 1e-12) {
        queue.erase(l);
        l->dead = true;
        return true;
      }
      return false;
    });
    pool.push_back(std::make_unique<Label>());
    Label* n = pool.back().get();
    n->v = v;
    n->interval = iv;
    n->k = k;
    n->t = t;
    n->g = g;
    n->h = h;
    n->conflicts = conflicts;
    n->parent = parent;
    n->action = a;
    n->id = out.generated++;
    bucket.push_back(n);
    queue.push(n);
  };

  {
    const std::vector<SafeInterval>& ivs = intervals(q.start);
    if (ivs.front().lo != 0) {
      out.status = SearchStatus::no_path;
      return out;
    }
    push_label(q.start, 0, 0, chain.advance(q.start, 0), 0.0, 0, nullptr, Action::Wait);
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
    Label* cur = queue.pop();
    out.lower_bound = queue.lower_bound();
    if (cur->terminal) {
      std::vector<int> vs;
      std::vector<Action> as;
      // walk back, expanding implicit waits between consecutive labels
      for (Label* n = cur; n->parent != nullptr; n = n->parent) {
        const Label* p = n->parent;
        if (n->action == Action::Wait) {
          for (int tau = n->t; tau > p->t; --tau) {
            vs.push_back(p->v);
            as.push_back(Action::Wait);
          }
        } else {
          vs.push_back(n->v);
          as.push_back(n->action);
          for (int tau = n->t - 1; tau > p->t; --tau) {
            vs.push_back(p->v);
            as.push_back(Action::Wait);
          }
        }
      }
      vs.push_back(q.start);
      std::reverse(vs.begin(), vs.end());
      std::reverse(as.begin(), as.end());
      out.path = detail::assemble_path(std::move(vs), std::move(as));
      out.path.cost = q.horizon && cur->t >= *q.horizon ? cur->f() : cur->g;
      out.status = SearchStatus::found;
      return out;
    }
    ++out.expanded;

    const int v = cur->v;
    const SafeInterval here = intervals(v)[static_cast<std::size_t>(cur->interval)];
    const double wv = gg.weight(v, Action::Wait);
    // latest departure from v, as an arrival time bound for the next vertex
    const std::int64_t depart_end =
        std::min<std::int64_t>(here.hi == kForever ? std::int64_t{kForever} : here.hi + 1, horizon);

    if (q.horizon && here.hi >= *q.horizon && cur->t < *q.horizon) {
      const int th = *q.horizon;
      push_terminal(v, th, cur->k, cur->g + (th - cur->t) * wv,
                    cur->conflicts + wait_conflicts(v, cur->t + 1, th), cur, Action::Wait);
    }

    for (Action a : kMoveActions) {
      const int u = gg.target(v, a);
      if (u < 0) continue;
      const double wu = gg.weight(u, Action::Wait);
      const double move = gg.weight(v, a);
      const int k2 = chain.advance(u, cur->k);
      const std::vector<SafeInterval>& ivs = intervals(u);
      for (std::size_t j = 0; j < ivs.size(); ++j) {
        const std::int64_t lo = std::max<std::int64_t>(cur->t + 1, ivs[j].lo);
        const std::int64_t hi = std::min<std::int64_t>(depart_end, ivs[j].hi);
        if (ivs[j].lo > depart_end) break;
        if (lo > hi) continue;
        std::int64_t first = lo;
        while (first <= hi && res.edge_blocked(v, u, static_cast<int>(first))) ++first;
        if (first > hi) continue;
        // waiting at u is no dearer than at v, so later arrivals are dominated
        const std::int64_t last = wv >= wu ? first : std::min(hi, std::max(t_last + 1, first));
        for (std::int64_t ta = first; ta <= last; ++ta) {
          const int t = static_cast<int>(ta);
          if (ta != first && res.edge_blocked(v, u, t)) continue;
          int c = cur->conflicts + wait_conflicts(v, cur->t + 1, t - 1);
          if (cat) c += cat->vertex_count(u, t) + cat->edge_count(v, u, t);
          push_label(u, static_cast<int>(j), t, k2, cur->g + (t - 1 - cur->t) * wv + move, c, cur,
                     a);
        }
      }
    }
  }
  out.status = SearchStatus::no_path;
  return out;
}

LowLevelResult sipp(const GuidanceGraph& gg, int start, int goal, const ReservationTable& obstacles,
                    const HeuristicTable& h, double omega1) {
  LowLevelQuery q;
  q.graph = &gg;
  q.start = start;
  q.goals = {goal};
  q.heuristics = {&h};
  q.reservations = &obstacles;
  q.omega1 = omega1;
  return sipp(q);
}

}  // namespace famapf
