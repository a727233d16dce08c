#include <doctest.h>

#include <cmath>
#include <numbers>

#include "famapf/trajectories.hpp"

using namespace famapf;

TEST_CASE("parse_trajectory_csv groups rows by id") {
  const auto ds = parse_trajectory_csv("traj_id,t,x,y\n1,0,0,0\n2,0,1,1\n1,1,1,0\n2,1,1,2\n");
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].id == "1");
  CHECK(ds[0].samples.size() == 2);
  CHECK(ds[1].samples.size() == 2);
  CHECK(ds[1].samples[1].y == 2.0);
}

TEST_CASE("integer ids sort numerically") {
  const auto ds = parse_trajectory_csv("traj_id,t,x,y\n10,0,0,0\n9,0,0,0\n");
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].id == "9");
  CHECK(ds[1].id == "10");
}

TEST_CASE("single-row trajectories are kept but unusable") {
  const auto ds = parse_trajectory_csv("traj_id,t,x,y\na,0,1,1\n");
  REQUIRE(ds.size() == 1);
  CHECK_FALSE(ds[0].usable_for_velocities());
  CHECK(extract_velocities(ds[0]).empty());
}

TEST_CASE("malformed trajectory files are rejected") {
  CHECK_THROWS_AS(parse_trajectory_csv("traj_id,t,x,y\n1,0,0,0\n1,0,1,0\n"), ParseError);
  CHECK_THROWS_AS(parse_trajectory_csv("id,t,x,y\n"), ParseError);
  CHECK_THROWS_AS(parse_trajectory_csv("traj_id,t,x,y\n1,zero,0,0\n"), ParseError);
  CHECK_THROWS_AS(parse_trajectory_csv("traj_id,t,x,y\n1,0,0\n"), ParseError);
  CHECK(parse_trajectory_csv("traj_id,t,x,y\n").empty());
}

TEST_CASE("csv round trip") {
  const auto ds = parse_trajectory_csv("traj_id,t,x,y\n1,0,0.5,0.25\n1,1.5,1,0\n");
  const auto again = parse_trajectory_csv(to_trajectory_csv(ds));
  REQUIRE(again.size() == 1);
  CHECK(again[0].samples[1].t == 1.5);
  CHECK(again[0].samples[0].y == 0.25);
}

TEST_CASE("extract_velocities follows the axis convention") {
  Trajectory east{"e", {{0, 0, 0}, {1, 1, 0}}};
  auto v = extract_velocities(east);
  REQUIRE(v.size() == 1);
  CHECK(v[0].u.theta == doctest::Approx(0.0));
  CHECK(v[0].u.rho == doctest::Approx(1.0));

  Trajectory up{"u", {{0, 0, 0}, {2, 0, -2}}};
  v = extract_velocities(up);
  REQUIRE(v.size() == 2);
  for (const auto& o : v) {
    CHECK(o.u.theta == doctest::Approx(std::numbers::pi / 2));
    CHECK(o.u.rho == doctest::Approx(1.0));
  }
  CHECK(v[1].pos.y == doctest::Approx(-1.0));

  Trajectory still{"s", {{0, 3, 3}, {1, 3, 3}}};
  v = extract_velocities(still);
  REQUIRE(v.size() == 1);
  CHECK(v[0].u.rho == 0.0);
  CHECK(v[0].u.theta == 0.0);
}

TEST_CASE("resampling interpolates between samples") {
  Trajectory t{"r", {{0, 0, 0}, {0.5, 1, 0}, {2, 1, 1.5}}};
  const auto v = extract_velocities(t, 1.0);
  REQUIRE(v.size() == 2);
  // resampled: (0,0), (1,0.5), (1,1.5)
  CHECK(v[0].u.rho == doctest::Approx(std::hypot(1.0, 0.5)));
  CHECK(v[1].u.theta == doctest::Approx(3 * std::numbers::pi / 2));
  CHECK_THROWS_AS(extract_velocities(t, 0.0), std::invalid_argument);
}

TEST_CASE("angle helpers") {
  CHECK(wrap_angle(-std::numbers::pi / 2) == doctest::Approx(3 * std::numbers::pi / 2));
  CHECK(wrap_angle(2 * std::numbers::pi) == doctest::Approx(0.0));
  CHECK(angle_diff(0.1, 2 * std::numbers::pi - 0.1) == doctest::Approx(0.2));
  CHECK(angle_diff(std::numbers::pi, 0.0) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("bin_observations counts per cell") {
  const GridMap m = parse_map("type octile\nheight 5\nwidth 5\nmap\n.....\n.....\n.....\n..@..\n.....\n");
  std::vector<VelocityObservation> obs{{{2.4, 3.9}, {0, 1}}};
  auto b = bin_observations(obs, m);
  CHECK(b.dropped == 1);
  CHECK(b.total() == 1);

  const GridMap open = parse_map("type octile\nheight 5\nwidth 5\nmap\n.....\n.....\n.....\n.....\n.....\n");
  b = bin_observations(obs, open);
  CHECK(b.gamma(open.index(Vertex{2, 3})) == 1);
  CHECK(b.total() == 1);

  std::vector<VelocityObservation> ten(10, VelocityObservation{{1.5, 1.5}, {0, 1}});
  ten.push_back({{7.0, 1.0}, {0, 1}});
  b = bin_observations(ten, open);
  CHECK(b.gamma(open.index(Vertex{1, 1})) == 10);
  CHECK(b.total() == 11);
  CHECK(b.dropped == 1);

  b = bin_observations(TrajectoryDataset{}, open);
  for (int i = 0; i < open.size(); ++i) CHECK(b.gamma(i) == 0);
}
