#include "famapf/swgmm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "famapf/rng.hpp"

namespace famapf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

double log_normal2(double d1, double d2, const Covariance2& sigma) {
  return -kLogTwoPi - 0.5 * std::log(sigma.det()) - 0.5 * sigma.mahalanobis_sq(d1, d2);
}

double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

struct Embedded {
  double c, s, r;
};

double dist2(const Embedded& a, const Embedded& b) {
  return (a.c - b.c) * (a.c - b.c) + (a.s - b.s) * (a.s - b.s) + (a.r - b.r) * (a.r - b.r);
}

// k-means++ seeding followed by a few Lloyd sweeps on the (cos, sin, rho) embedding.
// Returns per-sample cluster labels, or empty when fewer than k distinct points exist.
std::vector<int> kmeans_labels(std::span<const VelocitySample> obs, int k, Rng& rng) {
  const std::size_t n = obs.size();
  std::vector<Embedded> e(n);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = {std::cos(obs[i].theta), std::sin(obs[i].theta), obs[i].rho};
  }

  std::vector<Embedded> centers;
  centers.push_back(e[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)))]);
  std::vector<double> d2(n);
  while (static_cast<int>(centers.size()) < k) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best = std::min(best, dist2(e[i], c));
      d2[i] = best;
    }
    const int pick = rng.weighted(d2);
    if (pick < 0) return {};
    centers.push_back(e[static_cast<std::size_t>(pick)]);
  }

  std::vector<int> labels(n, 0);
  for (int sweep = 0; sweep < 10; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = dist2(e[i], centers[0]);
      for (int j = 1; j < k; ++j) {
        const double d = dist2(e[i], centers[static_cast<std::size_t>(j)]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (labels[i] != best) changed = true;
      labels[i] = best;
    }
    std::vector<Embedded> sum(static_cast<std::size_t>(k), Embedded{0, 0, 0});
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sum[static_cast<std::size_t>(labels[i])];
      s.c += e[i].c;
      s.s += e[i].s;
      s.r += e[i].r;
      ++count[static_cast<std::size_t>(labels[i])];
    }
    for (int j = 0; j < k; ++j) {
      const auto cj = static_cast<std::size_t>(j);
      if (count[cj] == 0) return {};
      centers[cj] = {sum[cj].c / count[cj], sum[cj].s / count[cj], sum[cj].r / count[cj]};
    }
    if (!changed && sweep > 0) break;
  }
  return labels;
}

SWGMM init_from_labels(std::span<const VelocitySample> obs, const std::vector<int>& labels, int k,
                       double min_variance) {
  const auto n = static_cast<double>(obs.size());
  SWGMM g;
  for (int j = 0; j < k; ++j) {
    double sc = 0.0;
    double ss = 0.0;
    double sr = 0.0;
    int cnt = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      if (labels[i] != j) continue;
      sc += std::cos(obs[i].theta);
      ss += std::sin(obs[i].theta);
      sr += obs[i].rho;
      ++cnt;
    }
    SWND d;
    d.mu_theta = wrap_angle(std::atan2(ss, sc));
    d.mu_rho = sr / cnt;
    double s11 = 0.0;
    double s12 = 0.0;
    double s22 = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      if (labels[i] != j) continue;
      const double dt = angle_diff(obs[i].theta, d.mu_theta);
      const double dr = obs[i].rho - d.mu_rho;
      s11 += dt * dt;
      s12 += dt * dr;
      s22 += dr * dr;
    }
    d.sigma = Covariance2{s11 / cnt, s12 / cnt, s22 / cnt}.with_eigenvalue_floor(min_variance);
    g.components.push_back({cnt / n, d});
  }
  return g;
}

struct Accumulator {
  double w = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double x11 = 0.0;
  double x12 = 0.0;
  double x22 = 0.0;
};

// One E-step over the truncated winding sum. Fills per-component sufficient statistics
// and returns the log-likelihood of the parameters the step was evaluated at.
double e_step(const SWGMM& g, std::span<const VelocitySample> obs, int K,
              std::vector<Accumulator>& acc) {
  const std::size_t J = g.components.size();
  const std::size_t M = static_cast<std::size_t>(2 * K + 1);
  acc.assign(J, Accumulator{});
  std::vector<double> logs(J * M);
  std::vector<double> log_beta(J);
  for (std::size_t j = 0; j < J; ++j) log_beta[j] = std::log(g.components[j].beta);

  double ll = 0.0;
  for (const auto& u : obs) {
    for (std::size_t j = 0; j < J; ++j) {
      const SWND& d = g.components[j].dist;
      for (int m = -K; m <= K; ++m) {
        const double x1 = u.theta + kTwoPi * m;
        logs[j * M + static_cast<std::size_t>(m + K)] =
            log_beta[j] + log_normal2(x1 - d.mu_theta, u.rho - d.mu_rho, d.sigma);
      }
    }
    const double lp = log_sum_exp(logs);
    ll += lp;
    for (std::size_t j = 0; j < J; ++j) {
      auto& a = acc[j];
      for (int m = -K; m <= K; ++m) {
        const double r = std::exp(logs[j * M + static_cast<std::size_t>(m + K)] - lp);
        if (r == 0.0) continue;
        const double x1 = u.theta + kTwoPi * m;
        const double x2 = u.rho;
        a.w += r;
        a.x1 += r * x1;
        a.x2 += r * x2;
        a.x11 += r * x1 * x1;
        a.x12 += r * x1 * x2;
        a.x22 += r * x2 * x2;
      }
    }
  }
  return ll;
}

}  // namespace

Covariance2 Covariance2::inverse() const {
  const double d = det();
  if (!(d > 0.0) || !(s11 > 0.0)) throw std::domain_error("singular covariance");
  return {s22 / d, -s12 / d, s11 / d};
}

double Covariance2::mahalanobis_sq(double d1, double d2) const {
  const double d = det();
  if (!(d > 0.0) || !(s11 > 0.0)) throw std::domain_error("singular covariance");
  return (s22 * d1 * d1 - 2.0 * s12 * d1 * d2 + s11 * d2 * d2) / d;
}

Covariance2 Covariance2::with_eigenvalue_floor(double floor) const {
  const double half_tr = 0.5 * (s11 + s22);
  const double half_diff = 0.5 * (s11 - s22);
  const double r = std::hypot(half_diff, s12);
  const double l1 = half_tr + r;
  const double l2 = half_tr - r;
  if (l2 >= floor) return *this;
  const double phi = 0.5 * std::atan2(2.0 * s12, s11 - s22);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double f1 = std::max(l1, floor);
  const double f2 = std::max(l2, floor);
  return {f1 * c * c + f2 * s * s, (f1 - f2) * c * s, f1 * s * s + f2 * c * c};
}

void SWGMM::validate() const {
  if (components.empty()) throw std::invalid_argument("mixture has no components");
  double sum = 0.0;
  for (const auto& c : components) {
    if (!(c.beta >= 0.0 && c.beta <= 1.0)) throw std::invalid_argument("mixture weight outside [0,1]");
    if (!c.dist.sigma.symmetric_positive_definite()) {
      throw std::invalid_argument("covariance is not symmetric positive definite");
    }
    if (!std::isfinite(c.dist.mu_theta) || !std::isfinite(c.dist.mu_rho)) {
      throw std::invalid_argument("non-finite component mean");
    }
    sum += c.beta;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("mixture weights do not sum to 1");
}

double swnd_density(const SWND& d, VelocitySample u, int winding_terms) {
  const double det = d.sigma.det();
  if (!(det > 0.0) || !(d.sigma.s11 > 0.0)) throw std::domain_error("singular covariance");
  const double norm = 1.0 / (kTwoPi * std::sqrt(det));
  double sum = 0.0;
  for (int m = -winding_terms; m <= winding_terms; ++m) {
    const double q = d.sigma.mahalanobis_sq(u.theta + kTwoPi * m - d.mu_theta, u.rho - d.mu_rho);
    sum += std::exp(-0.5 * q);
  }
  return norm * sum;
}

double swgmm_density(const SWGMM& g, VelocitySample u, int winding_terms) {
  double p = 0.0;
  for (const auto& c : g.components) p += c.beta * swnd_density(c.dist, u, winding_terms);
  return p;
}

double swgmm_log_likelihood(const SWGMM& g, std::span<const VelocitySample> obs,
                            int winding_terms) {
  std::vector<Accumulator> acc;
  return e_step(g, obs, winding_terms, acc);
}

std::optional<SWGMM> fit_swgmm_fixed(std::span<const VelocitySample> obs, int components,
                                     const FitConfig& cfg, std::uint64_t seed, EmRun* run) {
  if (components < 1 || obs.empty()) return std::nullopt;
  Rng rng(seed);
  const auto labels = kmeans_labels(obs, components, rng);
  if (labels.empty()) return std::nullopt;
  SWGMM g = init_from_labels(obs, labels, components, cfg.min_variance);

  EmRun local;
  EmRun& r = run ? *run : local;
  r = EmRun{};
  const double n = static_cast<double>(obs.size());
  std::vector<Accumulator> acc;
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double ll = e_step(g, obs, cfg.winding_terms, acc);
    r.log_likelihood.push_back(ll);
    if (ll < prev - 1e-9 * (1.0 + std::abs(prev))) r.monotone = false;
    assert(r.monotone && "EM log-likelihood decreased");
    if (it > 0 && std::abs(ll - prev) <= cfg.tolerance * std::abs(prev)) break;
    prev = ll;

    // A component that lost (almost) all responsibility is removed; the remaining weights are
    // renormalised and EM continues with fewer components.
    bool dropped = false;
    for (std::size_t j = acc.size(); j-- > 0;) {
      if (acc[j].w < 1e-6 * n || acc[j].w < 1e-8) {
        g.components.erase(g.components.begin() + static_cast<std::ptrdiff_t>(j));
        acc.erase(acc.begin() + static_cast<std::ptrdiff_t>(j));
        dropped = true;
      }
    }
    if (g.components.empty()) return std::nullopt;
    if (dropped) {
      double total = 0.0;
      for (const auto& a : acc) total += a.w;
      for (std::size_t j = 0; j < acc.size(); ++j) g.components[j].beta = acc[j].w / total;
      prev = -std::numeric_limits<double>::infinity();
      r.log_likelihood.clear();
      continue;
    }

    for (std::size_t j = 0; j < acc.size(); ++j) {
      const auto& a = acc[j];
      auto& c = g.components[j];
      c.beta = a.w / n;
      c.dist.mu_theta = a.x1 / a.w;
      c.dist.mu_rho = a.x2 / a.w;
      const Covariance2 s{a.x11 / a.w - c.dist.mu_theta * c.dist.mu_theta,
                          a.x12 / a.w - c.dist.mu_theta * c.dist.mu_rho,
                          a.x22 / a.w - c.dist.mu_rho * c.dist.mu_rho};
      c.dist.sigma = s.with_eigenvalue_floor(cfg.min_variance);
    }
  }
  const double final_ll = e_step(g, obs, cfg.winding_terms, acc);
  if (!r.log_likelihood.empty() &&
      final_ll < r.log_likelihood.back() - 1e-9 * (1.0 + std::abs(r.log_likelihood.back()))) {
    r.monotone = false;
  }
  r.log_likelihood.push_back(final_ll);
  r.components = static_cast<int>(g.components.size());
  const double params = 6.0 * r.components - 1.0;
  r.bic = -2.0 * final_ll + params * std::log(n);

  double sum = 0.0;
  for (auto& c : g.components) {
    c.dist.mu_theta = wrap_angle(c.dist.mu_theta);
    c.dist.mu_rho = std::max(0.0, c.dist.mu_rho);
    sum += c.beta;
  }
  for (auto& c : g.components) c.beta /= sum;
  return g;
}

std::optional<SWGMM> fit_swgmm(std::span<const VelocitySample> obs, const FitConfig& cfg,
                               FitDiagnostics* diag) {
  if (static_cast<int>(obs.size()) < std::max(1, cfg.min_observations)) return std::nullopt;
  std::optional<SWGMM> best;
  double best_bic = std::numeric_limits<double>::infinity();
  FitDiagnostics local;
  FitDiagnostics& d = diag ? *diag : local;
  d = FitDiagnostics{};
  for (int J = 1; J <= cfg.max_components; ++J) {
    EmRun run;
    auto g = fit_swgmm_fixed(obs, J, cfg, Rng::mix(cfg.seed, static_cast<std::uint64_t>(J)), &run);
    if (!g) continue;
    if (run.components < J) ++d.dropped_components;
    d.runs.push_back(run);
    // a run that shed components duplicates a smaller J; it only wins on a strictly better BIC
    if (run.bic < best_bic) {
      best_bic = run.bic;
      best = std::move(g);
      d.selected_components = run.components;
    }
  }
  return best;
}

}  // namespace famapf
