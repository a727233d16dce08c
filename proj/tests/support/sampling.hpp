#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "famapf/rng.hpp"
#include "famapf/swgmm.hpp"
#include "famapf/trajectories.hpp"

namespace testing_support {

inline double gaussian(famapf::Rng& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0.0) u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Draws from a semi-wrapped normal by sampling the bivariate normal and wrapping theta.
inline famapf::VelocitySample sample_swnd(const famapf::SWND& d, famapf::Rng& rng) {
  const double a = d.sigma.s11, b = d.sigma.s12, c = d.sigma.s22;
  const double l11 = std::sqrt(a);
  const double l21 = b / l11;
  const double l22 = std::sqrt(c - l21 * l21);
  const double z1 = gaussian(rng), z2 = gaussian(rng);
  return {famapf::wrap_angle(d.mu_theta + l11 * z1), d.mu_rho + l21 * z1 + l22 * z2};
}

inline std::vector<famapf::VelocitySample> sample_mixture(const famapf::SWGMM& g, int n,
                                                          famapf::Rng& rng) {
  std::vector<double> w;
  for (const auto& c : g.components) w.push_back(c.beta);
  std::vector<famapf::VelocitySample> out;
  for (int i = 0; i < n; ++i) out.push_back(sample_swnd(g.components[rng.weighted(w)].dist, rng));
  return out;
}

}  // namespace testing_support
