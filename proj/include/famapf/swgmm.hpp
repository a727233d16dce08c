#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "famapf/trajectories.hpp"

namespace famapf {

// Symmetric 2x2 covariance over (theta, rho).
struct Covariance2 {
  double s11 = 1.0;
  double s12 = 0.0;
  double s22 = 1.0;

  double det() const { return s11 * s22 - s12 * s12; }
  bool symmetric_positive_definite() const { return s11 > 0.0 && det() > 0.0; }
  // Throws std::domain_error when singular.
  Covariance2 inverse() const;
  // Quadratic form d^T Sigma^-1 d.
  double mahalanobis_sq(double d1, double d2) const;
  // Clamp eigenvalues from below; result is SPD for floor > 0.
  Covariance2 with_eigenvalue_floor(double floor) const;
};

// Semi-wrapped normal over u = (theta, rho): theta wraps around the circle, rho is linear.
struct SWND {
  double mu_theta = 0.0;
  double mu_rho = 0.0;
  Covariance2 sigma;
};

struct MixtureComponent {
  double beta = 1.0;
  SWND dist;
};

struct SWGMM {
  std::vector<MixtureComponent> components;

  // Throws std::invalid_argument on empty mixture, weights outside [0,1], weight sum off by
  // more than 1e-9, or a non-SPD covariance.
  void validate() const;
};

// Number of winding terms on each side of the principal copy (2K+1 terms in total).
inline constexpr int kDefaultWindingTerms = 2;

double swnd_density(const SWND& d, VelocitySample u, int winding_terms = kDefaultWindingTerms);
double swgmm_density(const SWGMM& g, VelocitySample u, int winding_terms = kDefaultWindingTerms);
double swgmm_log_likelihood(const SWGMM& g, std::span<const VelocitySample> obs,
                            int winding_terms = kDefaultWindingTerms);

struct FitConfig {
  int min_observations = 10;
  int max_components = 5;
  double min_variance = 1e-3;
  int max_iterations = 50;
  double tolerance = 1e-6;  // relative log-likelihood change
  int winding_terms = kDefaultWindingTerms;
  std::uint64_t seed = 42;
};

struct EmRun {
  int components = 0;
  std::vector<double> log_likelihood;  // one entry per E-step, plus the final value
  bool monotone = true;
  double bic = 0.0;
};

struct FitDiagnostics {
  std::vector<EmRun> runs;  // one per candidate J that could be fitted
  int selected_components = 0;
  int dropped_components = 0;
};

// EM with the winding number treated as a latent variable, J chosen by BIC over
// 1..max_components. Returns nullopt when there are fewer than min_observations samples.
// Deterministic for a given seed.
std::optional<SWGMM> fit_swgmm(std::span<const VelocitySample> obs, const FitConfig& cfg,
                               FitDiagnostics* diag = nullptr);

// Single-J EM; nullopt when the data cannot support J components.
std::optional<SWGMM> fit_swgmm_fixed(std::span<const VelocitySample> obs, int components,
                                     const FitConfig& cfg, std::uint64_t seed,
                                     EmRun* run = nullptr);

}  // namespace famapf
