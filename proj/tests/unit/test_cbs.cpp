#include <doctest.h>

#include <cmath>

#include "famapf/cbs.hpp"
#include "famapf/conflicts.hpp"
#include "oracles/joint_search.hpp"
#include "support/instances.hpp"

using namespace famapf;

namespace {

GridMap open_map(int w, int h) {
  return GridMap(w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w * h), 1));
}

TimedPath path_of(std::vector<int> vs) {
  TimedPath p;
  p.vertices = std::move(vs);
  p.actions.assign(p.vertices.size() - 1, Action::Wait);
  return p;
}

MapfProblem problem_of(const std::vector<int>& starts, const std::vector<int>& goals) {
  MapfProblem p;
  for (std::size_t i = 0; i < starts.size(); ++i) p.agents.push_back({starts[i], {goals[i]}});
  return p;
}

void check_solution(const GuidanceGraph& gg, const MapfProblem& p, const SolveResult& r) {
  REQUIRE(r.solved());
  REQUIRE(r.solution.paths.size() == p.agents.size());
  CHECK(detect_conflicts(r.solution.paths).empty());
  double total = 0.0;
  int unit = 0;
  for (std::size_t i = 0; i < p.agents.size(); ++i) {
    const TimedPath& path = r.solution.paths[i];
    CHECK(path.vertices.front() == p.agents[i].start);
    CHECK(path.vertices.back() == p.agents[i].goals.back());
    CHECK(path_is_consistent(gg, path));
    total += path_cost(gg, path);
    unit += path.length();
  }
  CHECK(r.solution.cost == doctest::Approx(total).epsilon(1e-12));
  CHECK(r.solution.unit_cost == unit);
}

}  // namespace

TEST_CASE("vertex conflict where two paths cross") {
  const GridMap m = open_map(3, 3);
  const int c = m.index(Vertex{1, 1});
  std::vector<TimedPath> paths{path_of({m.index(Vertex{1, 0}), m.index(Vertex{1, 0}), c, m.index(Vertex{1, 2})}),
                               path_of({m.index(Vertex{0, 1}), m.index(Vertex{0, 1}), c, m.index(Vertex{2, 1})})};
  const auto conflicts = detect_conflicts(paths);
  REQUIRE(conflicts.size() == 1);
  CHECK(conflicts[0].kind == ConflictKind::vertex);
  CHECK(conflicts[0].t == 2);
  CHECK(conflicts[0].v1 == c);
  CHECK(conflicts[0].a1 == 0);
  CHECK(conflicts[0].a2 == 1);
}

TEST_CASE("edge conflict on a swap") {
  std::vector<TimedPath> paths{path_of({0, 1}), path_of({1, 0})};
  const auto conflicts = detect_conflicts(paths);
  REQUIRE(conflicts.size() == 1);
  CHECK(conflicts[0].kind == ConflictKind::edge);
  CHECK(conflicts[0].t == 1);
  CHECK(conflicts[0].v1 == 0);
  CHECK(conflicts[0].v2 == 1);
}

TEST_CASE("disjoint paths do not conflict") {
  std::vector<TimedPath> paths{path_of({0, 1, 2}), path_of({5, 6, 7})};
  CHECK(detect_conflicts(paths).empty());
  CHECK_FALSE(first_conflict(paths).has_value());
}

TEST_CASE("resting agents still block their goal") {
  std::vector<TimedPath> paths{path_of({2}), path_of({0, 1, 2, 3})};
  const auto conflicts = detect_conflicts(paths);
  REQUIRE(conflicts.size() == 1);
  CHECK(conflicts[0].t == 2);
  CHECK(conflicts[0].v1 == 2);
  CHECK(detect_conflicts(paths, 1).empty());
}

TEST_CASE("conflicts are ordered by time") {
  std::vector<TimedPath> paths{path_of({0, 1, 2, 3}), path_of({9, 9, 2, 3}), path_of({0, 5, 6, 7})};
  const auto conflicts = detect_conflicts(paths);
  REQUIRE(conflicts.size() == 3);
  CHECK(conflicts[0].t == 0);
  CHECK(conflicts[1].t == 2);
  CHECK(conflicts[2].t == 3);
  CHECK(first_conflict(paths)->t == 0);
}

TEST_CASE("corridor with a niche matches the joint oracle") {
  const GridMap m = parse_map("type octile\nheight 2\nwidth 4\nmap\n....\n@.@@\n");
  const GuidanceGraph gg(m, 1.0);
  const MapfProblem p = problem_of({0, 3}, {3, 0});
  const SolveResult r = cbs_solve(gg, p, CbsConfig{});
  check_solution(gg, p, r);
  const double opt = oracle::joint_optimal_cost(gg, {0, 3}, {3, 0});
  CHECK(r.solution.cost == opt);
  CHECK(opt == 8.0);
}

TEST_CASE("single agent reduces to the low-level search") {
  Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    const GridMap m = testing_support::random_map(8, 8, 0.2, rng);
    const GuidanceGraph gg = build_guidance_graph(m, testing_support::random_cliffmap(m, rng), 1.0);
    const auto ends = testing_support::sample_distinct(testing_support::largest_component(m), 2, rng);
    const SolveResult r = cbs_solve(gg, problem_of({ends[0]}, {ends[1]}), CbsConfig{});
    REQUIRE(r.solved());
    const auto ll = spacetime_astar(gg, ends[0], ends[1], {}, precompute_heuristic(gg, ends[1]), 1.0);
    CHECK(r.solution.cost == doctest::Approx(ll.path.cost).epsilon(1e-12));
  }
}

TEST_CASE("optimal on small random instances") {
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const GridMap m = testing_support::random_map(4, 4, 0.15, rng);
    const GuidanceGraph gg = build_guidance_graph(m, testing_support::random_cliffmap(m, rng), 1.0);
    const auto comp = testing_support::largest_component(m);
    if (comp.size() < 6) continue;
    const int n = 2 + rng.below(2);
    const auto starts = testing_support::sample_distinct(comp, n, rng);
    const auto goals = testing_support::sample_distinct(comp, n, rng);
    const double opt = oracle::joint_optimal_cost(gg, starts, goals);
    for (LowLevelKind kind : {LowLevelKind::astar, LowLevelKind::sipp}) {
      CbsConfig cfg;
      cfg.low_level = kind;
      cfg.time_limit_s = 30;
      const MapfProblem p = problem_of(starts, goals);
      const SolveResult r = cbs_solve(gg, p, cfg);
      if (std::isinf(opt)) {
        CHECK_FALSE(r.solved());
        continue;
      }
      check_solution(gg, p, r);
      CHECK(r.solution.cost == doctest::Approx(opt).epsilon(1e-9));
    }
  }
}

TEST_CASE("bounded suboptimal solutions stay within the factor") {
  Rng rng(9);
  for (int i = 0; i < 15; ++i) {
    const GridMap m = testing_support::random_map(8, 8, 0.15, rng);
    const GuidanceGraph gg = build_guidance_graph(m, testing_support::random_cliffmap(m, rng), 1.0);
    const auto comp = testing_support::largest_component(m);
    const int n = 2 + rng.below(3);
    const MapfProblem p = problem_of(testing_support::sample_distinct(comp, n, rng),
                                     testing_support::sample_distinct(comp, n, rng));
    CbsConfig exact;
    exact.time_limit_s = 30;
    CbsConfig loose = exact;
    loose.omega1 = 1.5;
    const SolveResult a = cbs_solve(gg, p, exact);
    const SolveResult b = cbs_solve(gg, p, loose);
    REQUIRE(a.solved());
    check_solution(gg, p, b);
    CHECK(b.solution.cost <= 1.5 * a.solution.cost + 1e-9);
  }
}

TEST_CASE("unreachable goals are infeasible, not timeouts") {
  const GridMap m = parse_map("type octile\nheight 1\nwidth 4\nmap\n.@..\n");
  const GuidanceGraph gg(m, 1.0);
  const SolveResult r = cbs_solve(gg, problem_of({0, 2}, {3, 2}), CbsConfig{});
  CHECK(r.status == SolveStatus::infeasible);
  CHECK_FALSE(r.reason.empty());
}

TEST_CASE("tight time limits time out") {
  const GridMap m = open_map(32, 32);
  const GuidanceGraph gg(m, 1.0);
  Rng rng(10);
  const MapfProblem p = problem_of(testing_support::sample_distinct(m.passable_indices(), 200, rng),
                                   testing_support::sample_distinct(m.passable_indices(), 200, rng));
  CbsConfig cfg;
  cfg.time_limit_s = 1e-4;
  const SolveResult r = cbs_solve(gg, p, cfg);
  CHECK(r.status == SolveStatus::timeout);
}

TEST_CASE("high-level node limit") {
  const GridMap m = parse_map("type octile\nheight 2\nwidth 4\nmap\n....\n@.@@\n");
  const GuidanceGraph gg(m, 1.0);
  CbsConfig cfg;
  cfg.max_hl_nodes = 1;
  const SolveResult r = cbs_solve(gg, problem_of({0, 3}, {3, 0}), cfg);
  CHECK(r.status == SolveStatus::node_limit);
  CHECK_FALSE(r.best_effort.empty());
  CHECK_FALSE(r.best_effort_conflicts.empty());
}

TEST_CASE("solves are deterministic") {
  const GridMap m = open_map(10, 10);
  Rng rng(11);
  const GuidanceGraph gg = build_guidance_graph(m, testing_support::random_cliffmap(m, rng), 1.0);
  const MapfProblem p = problem_of(testing_support::sample_distinct(m.passable_indices(), 12, rng),
                                   testing_support::sample_distinct(m.passable_indices(), 12, rng));
  CbsConfig cfg;
  cfg.omega1 = 1.2;
  const SolveResult a = cbs_solve(gg, p, cfg);
  const SolveResult b = cbs_solve(gg, p, cfg);
  REQUIRE(a.solved());
  REQUIRE(b.solved());
  for (std::size_t i = 0; i < a.solution.paths.size(); ++i)
    CHECK(a.solution.paths[i].vertices == b.solution.paths[i].vertices);
}

TEST_CASE("windowed solves ignore conflicts beyond the horizon") {
  const GridMap m = open_map(6, 1);
  const GuidanceGraph gg(m, 1.0);
  const MapfProblem p = problem_of({0, 5}, {5, 0});
  CbsConfig cfg;
  cfg.horizon = 2;
  const SolveResult r = cbs_solve(gg, p, cfg);
  REQUIRE(r.solved());
  for (const auto& path : r.solution.paths) CHECK(path.length() == 2);
  CHECK(r.solution.cost == 10.0);
  CHECK(detect_conflicts(r.solution.paths, 2).empty());

  CbsConfig one_shot;
  one_shot.max_hl_nodes = 200;
  CHECK_FALSE(cbs_solve(gg, p, one_shot).solved());
}

TEST_CASE("shared obstacles are respected") {
  const GridMap m = open_map(3, 1);
  const GuidanceGraph gg(m, 1.0);
  MapfProblem p = problem_of({0}, {2});
  p.obstacles.block_vertex(1, 1);
  const SolveResult r = cbs_solve(gg, p, CbsConfig{});
  REQUIRE(r.solved());
  CHECK(r.solution.paths[0].at(1) != 1);
  CHECK(r.solution.cost == 3.0);
}

TEST_CASE("scenario input and option parsing") {
  const GridMap m = open_map(4, 4);
  const GuidanceGraph gg(m, 1.0);
  Scenario s;
  s.agents.push_back({{0, 0}, {3, 3}});
  s.agents.push_back({{3, 0}, {0, 3}});
  const SolveResult r = cbs_solve(gg, s, CbsConfig{});
  REQUIRE(r.solved());
  CHECK(r.solution.cost == 12.0);
  CHECK(parse_low_level("sipp") == LowLevelKind::sipp);
  CHECK(to_string(LowLevelKind::astar) == "astar");
  CHECK_THROWS(parse_low_level("dfs"));
  CbsConfig bad;
  bad.omega1 = 0.5;
  CHECK_THROWS_AS(cbs_solve(gg, s, bad), std::invalid_argument);
}
