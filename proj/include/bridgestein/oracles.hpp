#pragma once

// Closed-form reference laws used as ground truth against the chain
// simulators, plus the gradient of the Stein solution for the projected
// birth-death chain (birth rate lambda, death rate n^2).

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bridgestein {

/// Modified Bessel function of the first kind, order zero; power series
/// summed until the term falls below 1e-16 of the partial sum.
inline double bessel_i0(double x) {
  if (x < 0.0) throw std::invalid_argument("bessel_i0: x < 0");
  const double q = x * x / 4.0;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-16 * sum) break;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Truncated laws on the nonnegative integers.

struct IntegerLaw {
  std::vector<double> pmf;
  double tail_bound = 0.0;

  double mean() const {
    double m = 0.0;
    for (std::size_t n = 0; n < pmf.size(); ++n) m += n * pmf[n];
    return m;
  }

  std::vector<double> cdf() const {
    std::vector<double> out(pmf.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < pmf.size(); ++n) out[n] = acc += pmf[n];
    return out;
  }
};

/// pmf(n) = lambda^n / (n!)^2 / I0(2 sqrt(lambda)); lambda plays the role of
/// the product of the two component means.
inline double poisson_diag_pmf(double lambda, int n) {
  if (lambda <= 0.0) throw std::invalid_argument("poisson_diag_pmf: lambda");
  if (n < 0) throw std::invalid_argument("poisson_diag_pmf: n < 0");
  const double log_p =
      n * std::log(lambda) - 2.0 * std::lgamma(static_cast<double>(n) + 1.0);
  return std::exp(log_p) / bessel_i0(2.0 * std::sqrt(lambda));
}

/// Truncation point: smallest n with pmf tail below `tail`, certified with
/// the ratio pmf(n+1)/pmf(n) = lambda/(n+1)^2.
inline IntegerLaw poisson_diag_law(double lambda, double tail = 1e-12) {
  if (lambda <= 0.0) throw std::invalid_argument("poisson_diag_law: lambda");
  IntegerLaw law;
  double p = poisson_diag_pmf(lambda, 0);
  double mass = 0.0;
  for (int n = 0; n < 4000; ++n) {
    law.pmf.push_back(p);
    mass += p;
    const double ratio = lambda / ((n + 1.0) * (n + 1.0));
    // once the ratio is < 1/2 the remaining tail is below 2*next term
    if (ratio < 0.5 && p * ratio * 2.0 < tail && 1.0 - mass < tail) break;
    p *= ratio;
  }
  law.tail_bound = std::max(1.0 - mass, 0.0);
  return law;
}

/// Law of the pair count of a two-state bridge with jump rate alpha:
/// P(m) proportional to alpha^{2m} / (2m)!.
inline IntegerLaw hypercube_pair_count_law(double alpha, double tail = 1e-12) {
  if (alpha <= 0.0) throw std::invalid_argument("hypercube law: alpha");
  IntegerLaw law;
  std::vector<double> weights;
  double w = 1.0;
  double total = 0.0;
  for (int m = 0; m < 4000; ++m) {
    weights.push_back(w);
    total += w;
    const double ratio = alpha * alpha / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
    if (ratio < 0.5 && w * ratio * 2.0 < tail * total) break;
    w *= ratio;
  }
  law.pmf.resize(weights.size());
  for (std::size_t m = 0; m < weights.size(); ++m)
    law.pmf[m] = weights[m] / total;
  law.tail_bound = tail;
  return law;
}

// ---------------------------------------------------------------------------
// Exact 1-Wasserstein distance between integer laws: the L1 distance of the
// CDFs. The combined truncation mass is reported as the value's uncertainty.

struct W1Result {
  double value;
  double uncertainty;
};

inline W1Result exact_w1_integer(const IntegerLaw& a, const IntegerLaw& b) {
  if (a.tail_bound > 1e-12 || b.tail_bound > 1e-12)
    throw std::invalid_argument("exact_w1_integer: truncation too coarse");
  const std::size_t len = std::max(a.pmf.size(), b.pmf.size());
  double fa = 0.0, fb = 0.0, w1 = 0.0;
  for (std::size_t n = 0; n < len; ++n) {
    fa += n < a.pmf.size() ? a.pmf[n] : 0.0;
    fb += n < b.pmf.size() ? b.pmf[n] : 0.0;
    w1 += std::abs(fa - fb);
  }
  return {w1, a.tail_bound + b.tail_bound};
}

// ---------------------------------------------------------------------------
// Stein solution gradient for the birth-death chain with birth rate lambda
// and death rate n^2, whose stationary law is poisson_diag_law(lambda).
//
// With gbar = g - E_pi[g], the gradient D(n) = f(n+1) - f(n) of the solution
// of  lambda D(n) - n^2 D(n-1) = gbar(n)  is computed from tail sums,
//   D(n) = -(1 / (lambda pi(n))) sum_{k > n} pi(k) gbar(k),
// which is numerically stable because pi(k)/pi(n) decays super-factorially.

inline std::vector<double> solve_birth_death_stein(
    double lambda, const std::function<double(int)>& g, int n_max) {
  if (lambda <= 0.0) throw std::invalid_argument("stein solve: lambda");
  if (n_max < 1) throw std::invalid_argument("stein solve: n_max");
  const IntegerLaw law = poisson_diag_law(lambda);
  if (static_cast<std::size_t>(n_max) + 1 < law.pmf.size()) {
    double tail = 0.0;
    for (std::size_t k = n_max + 1; k < law.pmf.size(); ++k) tail += law.pmf[k];
    if (tail > 1e-12)
      throw std::invalid_argument("stein solve: n_max too small for tail");
  }

  // extend beyond n_max so the tail sums are exact to double precision
  const int n_ext = n_max + 64;
  std::vector<double> pi(n_ext + 1);
  for (int n = 0; n <= n_ext; ++n)
    pi[n] = n < static_cast<int>(law.pmf.size()) ? law.pmf[n]
                                                 : poisson_diag_pmf(lambda, n);
  double eg = 0.0;
  for (int n = 0; n <= n_ext; ++n) eg += pi[n] * g(n);

  std::vector<double> tail_sum(n_ext + 2, 0.0);
  for (int n = n_ext; n >= 0; --n)
    tail_sum[n] = tail_sum[n + 1] + pi[n] * (g(n) - eg);

  std::vector<double> grad(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    if (pi[n] <= 0.0)
      throw std::invalid_argument("stein solve: stationary mass underflow");
    grad[n] = -tail_sum[n + 1] / (lambda * pi[n]);
  }
  return grad;
}

}  // namespace bridgestein
