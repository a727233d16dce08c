#include <doctest.h>

#include "famapf/bound.hpp"
#include "famapf/cbs.hpp"
#include "support/instances.hpp"

using namespace famapf;

namespace {

Solution solution_with_costs(const std::vector<double>& costs) {
  Solution s;
  for (double c : costs) {
    TimedPath p;
    p.vertices = {0};
    p.cost = c;
    s.paths.push_back(p);
    s.cost += c;
  }
  return s;
}

}  // namespace

TEST_CASE("baseline solutions meet the bound with zero slack") {
  const BoundReport r = verify_suboptimality_bound(solution_with_costs({4, 6}), 1.0, 0.0, {4, 6});
  CHECK(r.holds);
  CHECK(r.slack == 0.0);
  CHECK(r.total_bound == 10.0);
  REQUIRE(r.agents.size() == 2);
  CHECK(r.agents[1].slack == 0.0);
}

TEST_CASE("normalised flow costs double the factor") {
  const BoundReport r = verify_suboptimality_bound(solution_with_costs({23.9}), 1.2, 1.0, {10});
  CHECK(r.agents[0].bound == doctest::Approx(24.0));
  CHECK(r.holds);
  CHECK_FALSE(verify_suboptimality_bound(solution_with_costs({24.5}), 1.2, 1.0, {10}).holds);
}

TEST_CASE("per-agent slack may be negative while the total holds") {
  const BoundReport r = verify_suboptimality_bound(solution_with_costs({5, 1}), 1.0, 0.0, {3, 3});
  CHECK(r.agents[0].slack == -2.0);
  CHECK(r.holds);
}

TEST_CASE("invalid verifier input") {
  CHECK_THROWS_AS(verify_suboptimality_bound(solution_with_costs({1, 2}), 1.0, 0.0, {1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_suboptimality_bound(solution_with_costs({1}), 0.9, 0.0, {1}),
                  std::invalid_argument);
}

TEST_CASE("bounded solver output passes the verifier") {
  Rng rng(31);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    const GridMap m = testing_support::random_map(8, 8, 0.15, rng);
    const GuidanceGraph unit(m, 1.0);
    const GuidanceGraph gg = build_guidance_graph(m, testing_support::random_cliffmap(m, rng), 1.0);
    const auto comp = testing_support::largest_component(m);
    const int n = 2 + rng.below(3);
    MapfProblem p;
    const auto starts = testing_support::sample_distinct(comp, n, rng);
    const auto goals = testing_support::sample_distinct(comp, n, rng);
    for (int a = 0; a < n; ++a) p.agents.push_back({starts[a], {goals[a]}});

    CbsConfig exact;
    exact.time_limit_s = 30;
    const SolveResult ref = cbs_solve(unit, p, exact);
    REQUIRE(ref.solved());
    std::vector<double> lengths;
    for (const auto& path : ref.solution.paths) lengths.push_back(path.length());

    CbsConfig cfg = exact;
    cfg.omega1 = 1.5;
    const SolveResult r = cbs_solve(gg, p, cfg);
    REQUIRE(r.solved());
    CHECK(gg.max_flow_ratio() <= 1.0);
    CHECK(verify_suboptimality_bound(r.solution, 1.5, gg.max_flow_ratio(), lengths).holds);
    ++checked;
  }
  CHECK(checked == 20);
}
