#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "famapf/cliffmap.hpp"
#include "support/instances.hpp"
#include "support/sampling.hpp"

using namespace famapf;

namespace {

GridMap open_map(int w, int h) {
  return GridMap(w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w * h), 1));
}

CellObservations observations_in(const GridMap& map, Vertex cell, int n, double theta, Rng& rng) {
  std::vector<VelocityObservation> obs;
  for (int i = 0; i < n; ++i) {
    const SWND d{theta, 1.0, {0.02, 0.0, 0.01}};
    obs.push_back({{cell.x + rng.uniform(), cell.y + rng.uniform()}, testing_support::sample_swnd(d, rng)});
  }
  return bin_observations(obs, map);
}

void check_same(const CliffMap& a, const CliffMap& b) {
  REQUIRE(a.cells.size() == b.cells.size());
  CHECK(a.width == b.width);
  CHECK(a.map_name == b.map_name);
  CHECK(a.dataset_hash == b.dataset_hash);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].gamma == b.cells[i].gamma);
    REQUIRE(a.cells[i].model.has_value() == b.cells[i].model.has_value());
    if (!a.cells[i].model) continue;
    const auto& ca = a.cells[i].model->components;
    const auto& cb = b.cells[i].model->components;
    REQUIRE(ca.size() == cb.size());
    for (std::size_t k = 0; k < ca.size(); ++k) {
      CHECK(ca[k].beta == cb[k].beta);
      CHECK(ca[k].dist.mu_theta == cb[k].dist.mu_theta);
      CHECK(ca[k].dist.mu_rho == cb[k].dist.mu_rho);
      CHECK(ca[k].dist.sigma.s12 == cb[k].dist.sigma.s12);
    }
  }
}

}  // namespace

TEST_CASE("empty observations give a modelless map") {
  const GridMap m = open_map(4, 3);
  const CliffMap cm = build_cliffmap(m, bin_observations(TrajectoryDataset{}, m), FitConfig{});
  CHECK(cm.modeled_cells() == 0);
  CHECK(cm.coverage == 0.0);
  CHECK(cm.cells.size() == 12);
}

TEST_CASE("one busy cell yields exactly one single-component model") {
  const GridMap m = open_map(5, 5);
  Rng rng(1);
  CliffBuildReport report;
  const CliffMap cm = build_cliffmap(m, observations_in(m, {2, 1}, 100, 0.0, rng), FitConfig{},
                                     Execution::serial, &report);
  CHECK(cm.modeled_cells() == 1);
  CHECK(report.fitted == 1);
  const auto& cell = cm.at(m.index(Vertex{2, 1}));
  CHECK(cell.gamma == 100);
  REQUIRE(cell.model.has_value());
  CHECK(cell.model->components.size() == 1);
  CHECK(std::fabs(angle_diff(cell.model->components[0].dist.mu_theta, 0.0)) < 0.05);
  CHECK(cm.coverage == doctest::Approx(1.0 / 25));
}

TEST_CASE("cells below the observation threshold stay modelless") {
  const GridMap m = open_map(3, 3);
  Rng rng(2);
  CliffBuildReport report;
  const CliffMap cm =
      build_cliffmap(m, observations_in(m, {0, 0}, 5, 1.0, rng), FitConfig{}, Execution::serial, &report);
  CHECK(cm.modeled_cells() == 0);
  CHECK(cm.at(0).gamma == 5);
  CHECK(report.below_threshold == 1);
}

TEST_CASE("serial and parallel builds agree") {
  const GridMap m = open_map(6, 6);
  Rng rng(4);
  std::vector<VelocityObservation> obs;
  for (int i = 0; i < 3000; ++i) {
    const SWND d{rng.uniform() < 0.5 ? 0.0 : std::numbers::pi, 1.0, {0.05, 0.0, 0.02}};
    obs.push_back({{rng.uniform() * 6, rng.uniform() * 6}, testing_support::sample_swnd(d, rng)});
  }
  const auto binned = bin_observations(obs, m);
  check_same(build_cliffmap(m, binned, FitConfig{}, Execution::serial),
             build_cliffmap(m, binned, FitConfig{}, Execution::parallel));
}

TEST_CASE("save and load round trip") {
  const GridMap m = open_map(2, 1);
  Rng rng(8);
  CliffMap cm = testing_support::random_cliffmap(m, rng, 1.0);
  cm.map_name = "two";
  cm.dataset_hash = "abc";
  check_same(cm, load_cliffmap(save_cliffmap(cm)));
  CHECK(save_cliffmap(load_cliffmap(save_cliffmap(cm))) == save_cliffmap(cm));
}

TEST_CASE("tampered documents are rejected") {
  const GridMap m = open_map(2, 1);
  CliffMap cm = CliffMap::empty(m);
  cm.cells[0].gamma = 12;
  cm.cells[0].model = SWGMM{{{0.5, {0, 1, {0.1, 0, 0.1}}}, {0.5, {1, 1, {0.1, 0, 0.1}}}}};
  auto doc = cliffmap_to_json(cm);
  doc["cells"][0]["components"][0]["beta"] = 0.7;  // weights now sum to 1.2
  CHECK_THROWS_AS(cliffmap_from_json(doc), std::invalid_argument);

  doc = cliffmap_to_json(cm);
  doc["schema_version"] = 99;
  CHECK_THROWS_AS(cliffmap_from_json(doc), std::invalid_argument);

  doc = cliffmap_to_json(cm);
  doc["cells"][0]["x"] = 5;
  CHECK_THROWS_AS(cliffmap_from_json(doc), std::invalid_argument);

  doc = cliffmap_to_json(cm);
  doc["cells"][0]["gamma"] = 0;
  CHECK_THROWS_AS(cliffmap_from_json(doc), std::invalid_argument);

  CHECK_THROWS_AS(load_cliffmap("{not json"), std::invalid_argument);
}

TEST_CASE("empty model list loads as a modelless map") {
  const std::string doc =
      R"({"schema_version":1,"width":3,"height":2,"cells":[{"x":1,"y":1,"gamma":4,"components":[]}]})";
  const CliffMap cm = load_cliffmap(doc);
  CHECK(cm.modeled_cells() == 0);
  CHECK(cm.at(4).gamma == 4);
}

TEST_CASE("dataset hash identifies the binned data") {
  const GridMap m = open_map(3, 3);
  Rng a(1), b(1), c(2);
  CHECK(hash_observations(observations_in(m, {1, 1}, 20, 0.0, a)) ==
        hash_observations(observations_in(m, {1, 1}, 20, 0.0, b)));
  Rng d(1);
  CHECK(hash_observations(observations_in(m, {1, 1}, 20, 0.0, d)) !=
        hash_observations(observations_in(m, {1, 1}, 20, 0.0, c)));
}

TEST_CASE("fit config json keeps defaults for missing keys") {
  FitConfig c;
  c.max_components = 3;
  c.seed = 99;
  const FitConfig again = fit_config_from_json(fit_config_to_json(c));
  CHECK(again.max_components == 3);
  CHECK(again.seed == 99);
  const FitConfig partial = fit_config_from_json(nlohmann::json{{"min_observations", 4}});
  CHECK(partial.min_observations == 4);
  CHECK(partial.max_components == FitConfig{}.max_components);
}
