#include <doctest.h>

#include "famapf/heuristic.hpp"
#include "famapf/lowlevel.hpp"
#include "famapf/reservation.hpp"
#include "oracles/all_pairs.hpp"
#include "oracles/time_expanded.hpp"
#include "support/instances.hpp"

using namespace famapf;

namespace {

using Search = LowLevelResult (*)(const LowLevelQuery&);
const Search kSearches[] = {static_cast<Search>(&spacetime_astar), static_cast<Search>(&sipp)};

GridMap open_map(int w, int h) {
  return GridMap(w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w * h), 1));
}

struct Instance {
  GridMap map;
  GuidanceGraph gg;
  int start;
  int goal;
  oracle::TimedObstacles obs;
  ReservationTable table;
};

Instance random_instance(Rng& rng, int size, bool weighted, int vertex_blocks, int edge_blocks) {
  GridMap m = testing_support::random_map(size, size, 0.2, rng);
  GuidanceGraph gg = weighted ? build_guidance_graph(m, testing_support::random_cliffmap(m, rng), 1.0)
                              : GuidanceGraph(m, 1.0);
  const auto comp = testing_support::largest_component(m);
  const auto ends = testing_support::sample_distinct(comp, 2, rng);
  Instance in{m, gg, ends[0], ends[1], {}, {}};
  for (int i = 0; i < vertex_blocks; ++i) {
    const int v = comp[static_cast<std::size_t>(rng.below(static_cast<int>(comp.size())))];
    const int t = 1 + rng.below(12);
    in.obs.vertices.insert({v, t});
    in.table.block_vertex(v, t);
  }
  for (int i = 0; i < edge_blocks; ++i) {
    const int v = comp[static_cast<std::size_t>(rng.below(static_cast<int>(comp.size())))];
    const Action a = kMoveActions[static_cast<std::size_t>(rng.below(4))];
    const int u = gg.target(v, a);
    if (u < 0) continue;
    const int t = 1 + rng.below(12);
    in.obs.edges.insert({v, u, t});
    in.table.block_edge(v, u, t);
  }
  return in;
}

std::vector<Constraint> as_constraints(const oracle::TimedObstacles& obs) {
  std::vector<Constraint> out;
  for (const auto& [v, t] : obs.vertices) out.push_back({ConflictKind::vertex, 0, v, v, t});
  for (const auto& [a, b, t] : obs.edges) out.push_back({ConflictKind::edge, 0, a, b, t});
  return out;
}

void check_path(const Instance& in, const TimedPath& p, bool one_shot = true) {
  REQUIRE_FALSE(p.empty());
  CHECK(p.vertices.front() == in.start);
  if (one_shot) CHECK(p.vertices.back() == in.goal);
  CHECK(path_is_consistent(in.gg, p));
  for (int t = 1; t < static_cast<int>(p.vertices.size()); ++t) {
    CHECK_FALSE(in.obs.vertices.count({p.vertices[t], t}));
    CHECK_FALSE(in.obs.edges.count({p.vertices[t - 1], p.vertices[t], t}));
  }
  if (one_shot) {
    for (const auto& [v, t] : in.obs.vertices)
      if (v == in.goal) CHECK(t < static_cast<int>(p.vertices.size()));
    CHECK(p.cost == doctest::Approx(path_cost(in.gg, p)).epsilon(1e-12));
  }
}

LowLevelQuery query(const Instance& in, const HeuristicTable& h, double omega,
                    std::optional<int> horizon = std::nullopt) {
  LowLevelQuery q;
  q.graph = &in.gg;
  q.start = in.start;
  q.goals = {in.goal};
  q.heuristics = {&h};
  q.reservations = &in.table;
  q.omega1 = omega;
  q.horizon = horizon;
  return q;
}

}  // namespace

TEST_CASE("straight run on a small open grid") {
  const GridMap m = open_map(3, 3);
  const GuidanceGraph gg(m, 1.0);
  const int s = m.index(Vertex{0, 0}), g = m.index(Vertex{2, 0});
  const HeuristicTable h = precompute_heuristic(gg, g);
  auto r = spacetime_astar(gg, s, g, {}, h, 1.0);
  REQUIRE(r.found());
  CHECK(r.path.cost == 2.0);
  CHECK(r.path.length() == 2);

  const int mid = m.index(Vertex{1, 0});
  r = spacetime_astar(gg, s, g, {{ConflictKind::vertex, 0, mid, mid, 1}}, h, 1.0);
  REQUIRE(r.found());
  CHECK(r.path.cost == 3.0);
  CHECK(r.path.at(1) != mid);
  oracle::TimedObstacles obs;
  obs.vertices.insert({mid, 1});
  CHECK(oracle::time_expanded_cost(gg, s, g, obs) == 3.0);
}

TEST_CASE("optimal focal search matches the time-expanded oracle") {
  Rng rng(100);
  for (int i = 0; i < 50; ++i) {
    const Instance in = random_instance(rng, 6, i % 2 == 1, 8, 4);
    const HeuristicTable h = precompute_heuristic(in.gg, in.goal);
    const double expected = oracle::time_expanded_cost(in.gg, in.start, in.goal, in.obs);
    const auto a = spacetime_astar(in.gg, in.start, in.goal, as_constraints(in.obs), h, 1.0);
    const auto s = sipp(in.gg, in.start, in.goal, in.table, h, 1.0);
    if (expected == oracle::kInf) {
      CHECK(a.status == SearchStatus::no_path);
      CHECK(s.status == SearchStatus::no_path);
      continue;
    }
    REQUIRE(a.found());
    REQUIRE(s.found());
    CHECK(a.path.cost == doctest::Approx(expected).epsilon(1e-12));
    CHECK(s.path.cost == doctest::Approx(expected).epsilon(1e-12));
    check_path(in, a.path);
    check_path(in, s.path);
  }
}

TEST_CASE("bounded searches stay within the factor") {
  Rng rng(101);
  for (int i = 0; i < 40; ++i) {
    const Instance in = random_instance(rng, 7, true, 10, 4);
    const HeuristicTable h = precompute_heuristic(in.gg, in.goal);
    const double opt = oracle::time_expanded_cost(in.gg, in.start, in.goal, in.obs);
    if (opt == oracle::kInf) continue;
    const auto a = spacetime_astar(query(in, h, 1.5));
    const auto s = sipp(query(in, h, 1.5));
    REQUIRE(a.found());
    REQUIRE(s.found());
    CHECK(a.path.cost <= 1.5 * opt + 1e-9);
    CHECK(s.path.cost <= 1.5 * opt + 1e-9);
    CHECK(a.lower_bound <= opt + 1e-9);
    check_path(in, a.path);
    check_path(in, s.path);
  }
}

TEST_CASE("windowed searches match the oracle") {
  Rng rng(102);
  for (int i = 0; i < 30; ++i) {
    const Instance in = random_instance(rng, 6, true, 8, 3);
    const HeuristicTable h = precompute_heuristic(in.gg, in.goal);
    const int horizon = 3 + rng.below(8);
    const double expected =
        oracle::time_expanded_cost(in.gg, in.start, in.goal, in.obs, horizon, &h.values());
    const auto a = spacetime_astar(query(in, h, 1.0, horizon));
    const auto s = sipp(query(in, h, 1.0, horizon));
    if (expected == oracle::kInf) {
      CHECK_FALSE(a.found());
      CHECK_FALSE(s.found());
      continue;
    }
    REQUIRE(a.found());
    REQUIRE(s.found());
    CHECK(a.path.cost == doctest::Approx(expected).epsilon(1e-12));
    CHECK(s.path.cost == doctest::Approx(expected).epsilon(1e-12));
    CHECK((a.path.length() == horizon || a.path.vertices.back() == in.goal));
    check_path(in, a.path, false);
    check_path(in, s.path, false);
  }
}

TEST_CASE("safe intervals wait out a blocked corridor") {
  const GridMap m = parse_map("type octile\nheight 1\nwidth 5\nmap\n.....\n");
  const GuidanceGraph gg(m, 1.0);
  ReservationTable res;
  oracle::TimedObstacles obs;
  for (int t = 2; t <= 4; ++t) {
    res.block_vertex(2, t);
    obs.vertices.insert({2, t});
  }
  const HeuristicTable h = precompute_heuristic(gg, 4);
  const auto s = sipp(gg, 0, 4, res, h, 1.0);
  REQUIRE(s.found());
  std::vector<Constraint> cons;
  for (int t = 2; t <= 4; ++t) cons.push_back({ConflictKind::vertex, 0, 2, 2, t});
  const auto a = spacetime_astar(gg, 0, 4, cons, h, 1.0);
  REQUIRE(a.found());
  CHECK(s.path.cost == a.path.cost);
  CHECK(s.path.cost == oracle::time_expanded_cost(gg, 0, 4, obs));
  CHECK(s.path.cost == 7.0);
  for (int t = 2; t <= 4; ++t) CHECK(s.path.at(t) != 2);
}

TEST_CASE("sipp equals space-time A* without obstacles") {
  Rng rng(103);
  for (int i = 0; i < 20; ++i) {
    const Instance in = random_instance(rng, 8, true, 0, 0);
    const HeuristicTable h = precompute_heuristic(in.gg, in.goal);
    const auto a = spacetime_astar(query(in, h, 1.0));
    const auto s = sipp(query(in, h, 1.0));
    REQUIRE(a.found());
    CHECK(s.path.cost == doctest::Approx(a.path.cost).epsilon(1e-12));
    CHECK(a.path.cost == doctest::Approx(h[in.start]).epsilon(1e-12));
  }
}

TEST_CASE("unreachable goals fail") {
  const GridMap m = parse_map("type octile\nheight 1\nwidth 3\nmap\n.@.\n");
  const GuidanceGraph gg(m, 1.0);
  const HeuristicTable h = precompute_heuristic(gg, 2);
  CHECK(spacetime_astar(gg, 0, 2, {}, h, 1.0).status == SearchStatus::no_path);
  CHECK(sipp(gg, 0, 2, ReservationTable{}, h, 1.0).status == SearchStatus::no_path);
}

TEST_CASE("long blockades are waited out") {
  const GridMap m = parse_map("type octile\nheight 1\nwidth 3\nmap\n...\n");
  const GuidanceGraph gg(m, 1.0);
  const HeuristicTable h = precompute_heuristic(gg, 2);
  ReservationTable res;
  for (int t = 0; t < 40; ++t) res.block_vertex(1, t);
  const auto s = sipp(gg, 0, 2, res, h, 1.0);
  REQUIRE(s.found());
  CHECK(s.path.cost == 41.0);
  LowLevelQuery q;
  q.graph = &gg;
  q.start = 0;
  q.goals = {2};
  q.heuristics = {&h};
  q.reservations = &res;
  const auto a = spacetime_astar(q);
  REQUIRE(a.found());
  CHECK(a.path.cost == 41.0);
}

TEST_CASE("goal chains visit goals in order") {
  const GridMap m = open_map(6, 6);
  const GuidanceGraph gg(m, 1.0);
  const std::vector<int> goals{m.index(Vertex{5, 0}), m.index(Vertex{0, 0}), m.index(Vertex{0, 5})};
  std::vector<HeuristicTable> tables;
  for (int g : goals) tables.push_back(precompute_heuristic(gg, g));
  LowLevelQuery q;
  q.graph = &gg;
  q.start = m.index(Vertex{2, 2});
  q.goals = goals;
  for (const auto& t : tables) q.heuristics.push_back(&t);
  for (Search search : kSearches) {
    const auto r = search(q);
    REQUIRE(r.found());
    CHECK(r.path.cost == 5 + 5 + 5);
    std::size_t k = 0;
    for (int v : r.path.vertices)
      if (k < goals.size() && v == goals[k]) ++k;
    CHECK(k == goals.size());
  }
}

TEST_CASE("node limit is reported") {
  const GridMap m = open_map(10, 10);
  const GuidanceGraph gg(m, 1.0);
  const HeuristicTable h = precompute_heuristic(gg, 99);
  LowLevelQuery q;
  q.graph = &gg;
  q.start = 0;
  q.goals = {99};
  q.heuristics = {&h};
  q.node_limit = 3;
  CHECK(spacetime_astar(q).status == SearchStatus::node_limit);
  CHECK(sipp(q).status == SearchStatus::node_limit);
}

TEST_CASE("avoidance table steers focal choices") {
  const GridMap m = open_map(3, 2);
  const GuidanceGraph gg(m, 1.0);
  TimedPath other;
  other.vertices = {1, 1, 1, 1};
  other.actions = {Action::Wait, Action::Wait, Action::Wait};
  ConflictAvoidanceTable cat;
  cat.add_path(other, false);
  const HeuristicTable h = precompute_heuristic(gg, 2);
  LowLevelQuery q;
  q.graph = &gg;
  q.start = 0;
  q.goals = {2};
  q.heuristics = {&h};
  q.avoid = &cat;
  q.omega1 = 2.0;
  for (Search search : kSearches) {
    const auto r = search(q);
    REQUIRE(r.found());
    for (int t = 0; t <= r.path.length(); ++t) CHECK(r.path.at(t) != 1);
    CHECK(r.path.cost <= 2.0 * 2.0);
  }
}
