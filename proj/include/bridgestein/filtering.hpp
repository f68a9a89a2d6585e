#pragma once

// Linear-filter conditionals and the drift-perturbation bounds.
//
// For the linear signal-observation pair with coupling alpha on [0, T], the
// conditional law of the signal given the observation path z is Gaussian with
//
//   mean      phi_T    = (1 / cosh(alpha T)) int_0^T sinh(alpha s) dZ_s
//   covariance sigma_{s,t} = [sinh(alpha T - alpha|t-s|)
//                             - sinh(alpha T - alpha(s+t))] / (2 alpha
//                             cosh(alpha T)),
//
// with the Brownian limit min(s, t) as alpha -> 0. The two drift bounds
// combine these with the constants of the sublinear-drift hypothesis
// |b'(x)| <= K (1+|x|)^{-gamma}, |b''| <= M, and with the largest positive
// root of an even polynomial perturbed by concave power terms.
//
// phi_t for t < T is evaluated with the same kernel on the truncated
// observation (horizon t); this interior rule is a modeling choice isolated
// in conditional_mean_phi_at.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "bridgestein/parallel.hpp"
#include "bridgestein/rng.hpp"
#include "bridgestein/stats.hpp"

namespace bridgestein {

struct LinearModel {
  double alpha = 1.0;
  double horizon = 1.0;  // T

  void validate() const {
    if (horizon <= 0.0) throw std::invalid_argument("LinearModel: T <= 0");
  }
};

struct DriftSpec {
  double b0 = 0.0;     // b(0)
  double k = 0.0;      // Lipschitz-scale constant K
  double gamma = 0.5;  // decay exponent in (0,1)
  double m = 0.0;      // bound on b''

  void validate() const {
    if (!(gamma > 0.0 && gamma < 1.0))
      throw std::invalid_argument("DriftSpec: gamma outside (0,1)");
    if (k < 0.0 || m < 0.0) throw std::invalid_argument("DriftSpec: K, M >= 0");
  }
};

struct ObservationPath {
  std::vector<double> t;  // 0 = t_0 < ... < t_n = T
  std::vector<double> z;  // z(0) = 0

  static ObservationPath zero(double horizon, std::size_t grid = 256) {
    ObservationPath path;
    for (std::size_t i = 0; i <= grid; ++i) {
      path.t.push_back(horizon * static_cast<double>(i) / grid);
      path.z.push_back(0.0);
    }
    return path;
  }

  void validate(double horizon) const {
    if (t.size() < 2 || t.size() != z.size())
      throw std::invalid_argument("ObservationPath: degenerate grid");
    if (t.front() != 0.0 || std::abs(t.back() - horizon) > 1e-12)
      throw std::invalid_argument("ObservationPath: grid must cover [0,T]");
    for (std::size_t i = 1; i < t.size(); ++i)
      if (t[i] <= t[i - 1])
        throw std::invalid_argument("ObservationPath: grid not increasing");
    for (double v : z)
      if (!std::isfinite(v))
        throw std::invalid_argument("ObservationPath: non-finite value");
  }
};

// ---------------------------------------------------------------------------
// Conditional covariance

inline double conditional_cov(const LinearModel& model, double s, double t) {
  model.validate();
  if (s < 0.0 || t < 0.0 || s > model.horizon || t > model.horizon)
    throw std::invalid_argument("conditional_cov: time outside [0,T]");
  const double alpha = model.alpha;
  const double big_t = model.horizon;
  if (std::abs(alpha) * big_t < 1e-4) {
    // series around alpha = 0: the Brownian covariance min(s,t) with the
    // second-order sinh/cosh correction
    const double m = std::min(s, t);
    const double a1 = alpha * (big_t - std::abs(t - s));
    const double a2 = alpha * (big_t - (s + t));
    const double correction = 1.0 + (a1 * a1 + a1 * a2 + a2 * a2) / 6.0;
    const double c = std::cosh(alpha * big_t);
    return m * correction / c;
  }
  const double numerator = std::sinh(alpha * (big_t - std::abs(t - s))) -
                           std::sinh(alpha * (big_t - (s + t)));
  return numerator / (2.0 * alpha * std::cosh(alpha * big_t));
}

inline double sigma_terminal(const LinearModel& model) {
  return conditional_cov(model, model.horizon, model.horizon);
}

// ---------------------------------------------------------------------------
// Conditional mean (left-point stochastic integral)

/// phi at horizon `upto` from the truncated observation.
inline double conditional_mean_phi_at(const LinearModel& model,
                                      const ObservationPath& obs,
                                      double upto) {
  model.validate();
  obs.validate(model.horizon);
  if (upto < 0.0 || upto > model.horizon + 1e-12)
    throw std::invalid_argument("conditional_mean: horizon");
  const double alpha = model.alpha;
  if (alpha == 0.0 || upto == 0.0) return 0.0;
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < obs.t.size(); ++i) {
    if (obs.t[i] >= upto) break;
    const double right = std::min(obs.t[i + 1], upto);
    // linear interpolation of z at a truncated right endpoint
    double z_right = obs.z[i + 1];
    if (right < obs.t[i + 1]) {
      const double w = (right - obs.t[i]) / (obs.t[i + 1] - obs.t[i]);
      z_right = obs.z[i] + w * (obs.z[i + 1] - obs.z[i]);
    }
    integral += std::sinh(alpha * obs.t[i]) * (z_right - obs.z[i]);
  }
  return integral / std::cosh(alpha * upto);
}

inline double conditional_mean_phi_terminal(const LinearModel& model,
                                            const ObservationPath& obs) {
  return conditional_mean_phi_at(model, obs, model.horizon);
}

// ---------------------------------------------------------------------------
// Quadrature: composite Simpson, panel-doubling until the relative change is
// below 1e-10.

inline double simpson_fixed(const std::function<double(double)>& f, double a,
                            double b, std::size_t panels) {
  // composite Simpson with `panels` parabolic panels (2*panels subintervals)
  const std::size_t n = 2 * panels;
  const double h = (b - a) / static_cast<double>(n);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i)
    sum += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

inline double integrate_adaptive(const std::function<double(double)>& f,
                                 double a, double b,
                                 std::size_t initial_panels = 1024,
                                 double rel_tol = 1e-10) {
  double prev = simpson_fixed(f, a, b, initial_panels);
  for (std::size_t panels = 2 * initial_panels; panels <= (1u << 22);
       panels *= 2) {
    const double next = simpson_fixed(f, a, b, panels);
    if (std::abs(next - prev) <= rel_tol * std::max(1.0, std::abs(next)))
      return next;
    prev = next;
  }
  return prev;
}

// ---------------------------------------------------------------------------
// Largest positive root of p(x) = x^2 - A x^{2-g} - B x^{2-2g} - C x - D
// with nonnegative coefficients (both drift-bound regimes produce this form).

struct RootPolynomial {
  double gamma = 0.5;
  double coeff_pow_2mg = 0.0;   // A, multiplies x^{2-gamma}
  double coeff_pow_2m2g = 0.0;  // B, multiplies x^{2-2gamma}
  double coeff_linear = 0.0;    // C
  double coeff_const = 0.0;     // D

  double operator()(double x) const {
    return x * x - coeff_pow_2mg * std::pow(x, 2.0 - gamma) -
           coeff_pow_2m2g * std::pow(x, 2.0 - 2.0 * gamma) -
           coeff_linear * x - coeff_const;
  }

  double scale() const {
    return std::max({1.0, coeff_pow_2mg, coeff_pow_2m2g, coeff_linear,
                     coeff_const});
  }

  /// Sum of term magnitudes at x; bounds the round-off of an evaluation.
  double term_magnitude(double x) const {
    return x * x + coeff_pow_2mg * std::pow(x, 2.0 - gamma) +
           coeff_pow_2m2g * std::pow(x, 2.0 - 2.0 * gamma) +
           coeff_linear * x + coeff_const;
  }
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  bool anomaly = false;  // no clean sign change located
};

/// Doubling from 1 to bracket the positive tail, a descending scan with 1024
/// subdivisions per octave to find the rightmost sign change, then bisection
/// to 1e-12 relative width.
inline RootResult largest_positive_root(const RootPolynomial& p) {
  RootResult result;
  double upper = 1.0;
  int doublings = 0;
  while (!(p(upper) > 0.0)) {
    upper *= 2.0;
    if (++doublings > 600 || !std::isfinite(upper)) {
      result.anomaly = true;
      return result;
    }
  }
  // make sure the tail stays positive on a sampled stretch beyond `upper`
  for (int k = 1; k <= 8; ++k) {
    if (!std::isfinite(upper)) {
      result.anomaly = true;
      return result;
    }
    if (!(p(upper * (1.0 + 0.5 * k)) > 0.0)) {
      upper *= 16.0;
      k = 0;
    }
  }

  // descending octave scan for the rightmost non-positive point
  double lo = 0.0, hi = 0.0;
  bool found = false;
  double octave_hi = upper;
  while (!found && octave_hi > 1e-300) {
    const double octave_lo = octave_hi / 2.0;
    double right = octave_hi;
    for (int k = 1; k <= 1024; ++k) {
      const double x =
          octave_hi - (octave_hi - octave_lo) * static_cast<double>(k) / 1024.0;
      if (p(x) <= 0.0) {
        lo = x;
        hi = right;
        found = true;
        break;
      }
      right = x;
    }
    octave_hi = octave_lo;
  }
  if (!found) {
    // p > 0 on (0, upper]; the only nonnegative root can be 0 itself
    if (p(0.0) == 0.0) {
      result.root = 0.0;
      result.residual = 0.0;
      return result;
    }
    result.anomaly = true;
    return result;
  }

  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, hi);
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (p(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  result.root = 0.5 * (lo + hi);
  result.residual = std::abs(p(result.root));
  // anomaly threshold widened by the round-off floor of evaluating p at the
  // root; for roots of moderate size this reduces to the plain tolerance
  if (result.residual >
      1e-9 * p.scale() + 1e-13 * p.term_magnitude(result.root))
    result.anomaly = true;
  return result;
}

// ---------------------------------------------------------------------------
// Monte Carlo moment of the discrete sup of the centered conditional law:
// E max_i X_{t_i}^2 on a uniform grid, via a jittered Cholesky factor.

struct SupMomentEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t grid_size = 0;
  std::size_t replicas = 0;
};

namespace detail {

/// In-place lower Cholesky; returns the smallest pivot encountered before
/// jitter. Throws if factorization fails even with jitter.
inline double cholesky_with_jitter(std::vector<double>& matrix, std::size_t n,
                                   double jitter) {
  std::vector<double> original = matrix;
  double min_pivot = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 2; ++attempt) {
    matrix = original;
    if (attempt == 1)
      for (std::size_t i = 0; i < n; ++i) matrix[i * n + i] += jitter;
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      double diag = matrix[j * n + j];
      for (std::size_t k = 0; k < j; ++k) diag -= matrix[j * n + k] * matrix[j * n + k];
      if (attempt == 0) min_pivot = std::min(min_pivot, diag);
      if (diag <= 0.0) {
        ok = false;
        break;
      }
      const double root = std::sqrt(diag);
      matrix[j * n + j] = root;
      for (std::size_t i = j + 1; i < n; ++i) {
        double value = matrix[i * n + j];
        for (std::size_t k = 0; k < j; ++k)
          value -= matrix[i * n + k] * matrix[j * n + k];
        matrix[i * n + j] = value / root;
      }
      for (std::size_t k = j + 1; k < n; ++k) matrix[j * n + k] = 0.0;
    }
    if (ok) return min_pivot;
  }
  throw std::runtime_error("cholesky failed after jitter");
}

}  // namespace detail

/// Smallest pivot of the grid covariance before jitter (PSD diagnostic).
inline double covariance_min_pivot(const LinearModel& model,
                                   std::size_t grid_size) {
  std::vector<double> times(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i)
    times[i] = model.horizon * static_cast<double>(i + 1) /
               static_cast<double>(grid_size);
  std::vector<double> cov(grid_size * grid_size);
  for (std::size_t i = 0; i < grid_size; ++i)
    for (std::size_t j = 0; j < grid_size; ++j)
      cov[i * grid_size + j] = conditional_cov(model, times[i], times[j]);
  std::vector<double> scratch = cov;
  return detail::cholesky_with_jitter(scratch, grid_size, 1e-12);
}

/// Independent of the observation path by construction: the centered law
/// never reads z.
inline SupMomentEstimate gaussian_sup_moment(const LinearModel& model,
                                             std::size_t grid_size,
                                             std::size_t replicas,
                                             std::uint64_t seed) {
  model.validate();
  if (grid_size < 64) throw std::invalid_argument("sup moment: grid too small");
  if (replicas < 1000)
    throw std::invalid_argument("sup moment: too few replicas");

  std::vector<double> times(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i)
    times[i] = model.horizon * static_cast<double>(i + 1) /
               static_cast<double>(grid_size);
  std::vector<double> factor(grid_size * grid_size);
  for (std::size_t i = 0; i < grid_size; ++i)
    for (std::size_t j = 0; j < grid_size; ++j)
      factor[i * grid_size + j] = conditional_cov(model, times[i], times[j]);
  detail::cholesky_with_jitter(factor, grid_size, 1e-12);

  std::vector<double> sup_sq(replicas);
  parallel_replicas(replicas, [&](std::size_t rep) {
    Rng rng(seed, rep);
    std::vector<double> normals(grid_size);
    for (auto& x : normals) x = rng.normal();
    double best = 0.0;
    for (std::size_t i = 0; i < grid_size; ++i) {
      double x = 0.0;
      for (std::size_t k = 0; k <= i; ++k)
        x += factor[i * grid_size + k] * normals[k];
      best = std::max(best, x * x);
    }
    sup_sq[rep] = best;
  });

  RunningStat stat;
  for (double v : sup_sq) stat.add(v);
  return {stat.mean, stat.standard_error(), grid_size, replicas};
}

struct SupMomentRefinement {
  double coarse = 0.0;       // grid estimate
  double fine = 0.0;         // doubled-grid estimate on the same paths
  double change_se = 0.0;    // paired standard error of (fine - coarse)
  double relative_change() const {
    return coarse > 0.0 ? (fine - coarse) / coarse : 0.0;
  }
};

/// Grid-doubling diagnostic with common paths: each replica is drawn on the
/// doubled grid and the coarse estimate takes the even-index subset, whose
/// marginal law is exactly the coarse-grid one. The pairing makes the
/// doubling change estimable with a tiny standard error.
inline SupMomentRefinement gaussian_sup_moment_refinement(
    const LinearModel& model, std::size_t grid_size, std::size_t replicas,
    std::uint64_t seed) {
  model.validate();
  if (grid_size < 64) throw std::invalid_argument("sup moment: grid too small");
  if (replicas < 1000)
    throw std::invalid_argument("sup moment: too few replicas");
  const std::size_t fine_n = 2 * grid_size;
  std::vector<double> times(fine_n);
  for (std::size_t i = 0; i < fine_n; ++i)
    times[i] = model.horizon * static_cast<double>(i + 1) /
               static_cast<double>(fine_n);
  std::vector<double> factor(fine_n * fine_n);
  for (std::size_t i = 0; i < fine_n; ++i)
    for (std::size_t j = 0; j < fine_n; ++j)
      factor[i * fine_n + j] = conditional_cov(model, times[i], times[j]);
  detail::cholesky_with_jitter(factor, fine_n, 1e-12);

  std::vector<double> coarse_sq(replicas), fine_sq(replicas);
  parallel_replicas(replicas, [&](std::size_t rep) {
    Rng rng(seed, rep);
    std::vector<double> normals(fine_n);
    for (auto& x : normals) x = rng.normal();
    double best_fine = 0.0, best_coarse = 0.0;
    for (std::size_t i = 0; i < fine_n; ++i) {
      double x = 0.0;
      for (std::size_t k = 0; k <= i; ++k)
        x += factor[i * fine_n + k] * normals[k];
      best_fine = std::max(best_fine, x * x);
      if (i % 2 == 1) best_coarse = std::max(best_coarse, x * x);
    }
    coarse_sq[rep] = best_coarse;
    fine_sq[rep] = best_fine;
  });

  RunningStat coarse, fine, diff;
  for (std::size_t rep = 0; rep < replicas; ++rep) {
    coarse.add(coarse_sq[rep]);
    fine.add(fine_sq[rep]);
    diff.add(fine_sq[rep] - coarse_sq[rep]);
  }
  return {coarse.mean, fine.mean, diff.standard_error()};
}

// ---------------------------------------------------------------------------
// Drift-bound constants and assembly

/// K |b(0)| + K^2 / (1 - gamma) + M / 2, for gamma in [1/2, 1).
inline double drift_perturbation_constant(const DriftSpec& drift) {
  drift.validate();
  if (drift.gamma < 0.5)
    throw std::invalid_argument(
        "drift constant: gamma < 1/2 belongs to the small-gamma bound");
  return drift.k * std::abs(drift.b0) +
         drift.k * drift.k / (1.0 - drift.gamma) + drift.m / 2.0;
}

struct FilteringMcParams {
  std::size_t grid_size = 256;
  std::size_t replicas = 20000;
  std::uint64_t seed = 1;
};

struct FilteringBound {
  double value = 0.0;
  double se = 0.0;  // from the sup-moment Monte Carlo factor
  nlohmann::json details;
};

inline FilteringBound drift_bound_large_gamma(const LinearModel& model,
                                                const ObservationPath& obs,
                                                const DriftSpec& drift,
                                                const FilteringMcParams& mc) {
  model.validate();
  drift.validate();
  if (drift.gamma < 0.5)
    throw std::invalid_argument("large-gamma bound needs gamma in [1/2, 1)");
  const double big_t = model.horizon;
  const double w_const = drift_perturbation_constant(drift);
  const double sigma_t = sigma_terminal(model);
  const double cov_integral = integrate_adaptive(
      [&](double s) { return conditional_cov(model, s, big_t); }, 0.0, big_t);
  const double phi_t = conditional_mean_phi_terminal(model, obs);
  const double eta =
      w_const * cov_integral + sigma_t * std::abs(drift.b0) + std::abs(phi_t);
  const double zeta = sigma_t * drift.k / (1.0 - drift.gamma);

  RootPolynomial poly;
  poly.gamma = drift.gamma;
  poly.coeff_pow_2mg = zeta;
  poly.coeff_linear = eta;
  poly.coeff_const = sigma_t;
  const RootResult root = largest_positive_root(poly);
  if (root.anomaly)
    throw std::runtime_error("large-gamma bound: root finder anomaly");

  const auto sup =
      gaussian_sup_moment(model, mc.grid_size, mc.replicas, mc.seed);
  const double bracket =
      std::abs(drift.b0) + big_t * w_const +
      drift.k / (1.0 - drift.gamma) * std::pow(root.root, 1.0 - drift.gamma);

  FilteringBound out;
  out.value = sup.estimate * bracket;
  out.se = sup.standard_error * bracket;
  out.details = {{"w_const", w_const},
                 {"eta", eta},
                 {"zeta", zeta},
                 {"root", root.root},
                 {"sigma_terminal", sigma_t},
                 {"cov_integral", cov_integral},
                 {"phi_terminal", phi_t},
                 {"sup_moment", sup.estimate},
                 {"sup_moment_se", sup.standard_error}};
  return out;
}

inline FilteringBound drift_bound_small_gamma(const LinearModel& model,
                                                const ObservationPath& obs,
                                                const DriftSpec& drift,
                                                const FilteringMcParams& mc) {
  model.validate();
  drift.validate();
  if (drift.gamma >= 0.5)
    throw std::invalid_argument("small-gamma bound needs gamma in (0, 1/2)");
  const double big_t = model.horizon;
  const double c1 = drift.k / (1.0 - drift.gamma);
  const double c2 = drift.k * std::abs(drift.b0) + drift.m / 2.0;
  const double c3 = drift.k * drift.k / (1.0 - drift.gamma);

  const double sigma_t = sigma_terminal(model);
  const double sigma_bar =
      integrate_adaptive(
          [&](double s) { return conditional_cov(model, s, s); }, 0.0, big_t) +
      sigma_t;
  const double phi_t = conditional_mean_phi_terminal(model, obs);
  const double psi_phi =
      integrate_adaptive(
          [&](double s) {
            const double phi = conditional_mean_phi_at(model, obs, s);
            return phi * phi;
          },
          0.0, big_t, 256, 1e-9) +
      phi_t * phi_t;

  RootPolynomial poly;
  poly.gamma = drift.gamma;
  poly.coeff_pow_2mg = std::numbers::sqrt2 * sigma_bar * c1;
  poly.coeff_pow_2m2g = 2.0 * sigma_bar * c3 * std::pow(big_t, drift.gamma);
  poly.coeff_linear =
      sigma_bar * std::numbers::sqrt2 * std::abs(drift.b0) +
      sigma_bar * std::sqrt(2.0 * big_t * (c2 * c2 + 2.0 * c3 * c3)) +
      std::sqrt(psi_phi);
  poly.coeff_const = sigma_bar;
  const RootResult root = largest_positive_root(poly);
  if (root.anomaly)
    throw std::runtime_error("small-gamma bound: root finder anomaly");

  const auto sup =
      gaussian_sup_moment(model, mc.grid_size, mc.replicas, mc.seed);
  const double bracket =
      std::abs(drift.b0) + (c2 + c3) * big_t +
      c3 * std::pow(big_t, 0.5 + drift.gamma) *
          std::pow(root.root, 1.0 - 2.0 * drift.gamma) +
      c1 * std::pow(root.root, 1.0 - drift.gamma);

  FilteringBound out;
  out.value = sup.estimate * bracket;
  out.se = sup.standard_error * bracket;
  out.details = {{"c1", c1},
                 {"c2", c2},
                 {"c3", c3},
                 {"root", root.root},
                 {"sigma_terminal", sigma_t},
                 {"sigma_bar", sigma_bar},
                 {"psi_phi", psi_phi},
                 {"phi_terminal", phi_t},
                 {"sup_moment", sup.estimate},
                 {"sup_moment_se", sup.standard_error}};
  return out;
}

}  // namespace bridgestein
