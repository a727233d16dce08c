#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "famapf/uasim.hpp"
#include "oracles/sampled_conflicts.hpp"
#include "support/instances.hpp"

namespace testing_support {

struct CrossingCase {
  std::vector<famapf::Track> agents;
  std::vector<famapf::Track> uas;
};

// Random walk of an agent on an open grid, with occasional waits.
inline famapf::TimedPath random_walk(const famapf::GridMap& map, int steps, famapf::Rng& rng) {
  famapf::TimedPath p;
  famapf::Vertex v{rng.below(map.width()), rng.below(map.height())};
  p.vertices.push_back(map.index(v));
  const famapf::Action heading = famapf::kMoveActions[static_cast<std::size_t>(rng.below(4))];
  for (int i = 0; i < steps; ++i) {
    famapf::Action a = heading;
    const double r = rng.uniform();
    if (r < 0.2) a = famapf::Action::Wait;
    else if (r < 0.4) a = famapf::kMoveActions[static_cast<std::size_t>(rng.below(4))];
    famapf::Vertex u = famapf::step(v, a);
    if (!map.passable(u)) {
      a = famapf::Action::Wait;
      u = v;
    }
    p.actions.push_back(a);
    p.vertices.push_back(map.index(u));
    v = u;
  }
  return p;
}

// True when the sampled distance profile has no extremum or endpoint within `margin` of the
// threshold, so a fixed sampling rate resolves every episode boundary unambiguously.
inline bool clear_of_threshold(const famapf::Track& a, const famapf::Track& b, double threshold,
                               double margin) {
  const double lo = std::max(a.samples.front().t, b.samples.front().t);
  const double hi = std::min(a.samples.back().t, b.samples.back().t);
  if (lo > hi) return true;
  const int per_step = 2000;
  const long steps = static_cast<long>(std::ceil((hi - lo) * per_step));
  std::vector<double> d;
  for (long k = 0; k <= steps; ++k) {
    const double t = std::min(hi, lo + static_cast<double>(k) / per_step);
    const auto p = oracle::track_at(a, t);
    const auto q = oracle::track_at(b, t);
    d.push_back(std::hypot(p.x - q.x, p.y - q.y));
  }
  auto near = [&](double x) { return std::fabs(x - threshold) < margin; };
  if (near(d.front()) || near(d.back())) return false;
  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    const bool extremum = (d[i] <= d[i - 1] && d[i] <= d[i + 1]) || (d[i] >= d[i - 1] && d[i] >= d[i + 1]);
    if (extremum && near(d[i])) return false;
  }
  return true;
}

// Two agents wandering a 10x10 open grid and two UAs crossing it, rejected and redrawn while any
// pair comes within `margin` of the contact threshold at an extremum.
inline CrossingCase random_crossing(famapf::Rng& rng, double threshold, double margin = 0.02) {
  const famapf::GridMap map(10, 10, std::vector<std::uint8_t>(100, 1));
  while (true) {
    CrossingCase c;
    std::vector<famapf::TimedPath> paths;
    for (int i = 0; i < 2; ++i) paths.push_back(random_walk(map, 12, rng));
    c.agents = famapf::agent_tracks(map, paths, 12);
    std::vector<famapf::UATrajectory> uas;
    for (int i = 0; i < 2; ++i) {
      famapf::Vertex s{0, rng.below(10)}, g{9, rng.below(10)};
      if (rng.uniform() < 0.5) {
        s = {rng.below(10), 0};
        g = {rng.below(10), 9};
      }
      const double speed = rng.uniform() < 0.5 ? 1.0 : 2.0;
      auto u = famapf::plan_ua_path(map, s, g, speed, famapf::UAConnectivity::eight, rng.uniform() * 4.0);
      u.id = i;
      uas.push_back(u);
    }
    c.uas = famapf::ua_tracks(uas);
    bool ok = true;
    for (const auto& a : c.agents)
      for (const auto& u : c.uas) ok = ok && clear_of_threshold(a, u, threshold, margin);
    if (ok) return c;
  }
}

}  // namespace testing_support
