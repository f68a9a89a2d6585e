#pragma once

// Small statistics toolbox shared by the estimators and the test suites:
// streaming mean/variance, Kolmogorov-Smirnov tests, chi-square goodness of
// fit, and total variation against a discrete law.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bridgestein {

struct RunningStat {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  double variance() const {
    return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  }
  double stddev() const { return std::sqrt(variance()); }
  double standard_error() const {
    return n > 0 ? stddev() / std::sqrt(static_cast<double>(n)) : 0.0;
  }
};

inline double mean_of(const std::vector<double>& xs) {
  RunningStat s;
  for (double x : xs) s.add(x);
  return s.mean;
}

// ---------------------------------------------------------------------------
// Regularized incomplete gamma (series / continued fraction), for chi-square
// tail probabilities.

namespace detail {

inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

/// Upper regularized incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - detail::gamma_p_series(a, x)
                     : detail::gamma_q_contfrac(a, x);
}

/// P(chi2_df > stat).
inline double chi_square_tail(double stat, double df) {
  return gamma_q(df / 2.0, stat / 2.0);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

/// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 l^2).
inline double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic;
  double p_value;
};

/// One-sample KS against a continuous CDF.
inline KsResult ks_test_cdf(std::vector<double> samples,
                            const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test_cdf: empty");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  const double sqrt_n = std::sqrt(n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  return {d, kolmogorov_tail(lambda)};
}

/// Two-sample KS (ties allowed; with ties the test is conservative).
inline KsResult ks_test_two_sample(std::vector<double> a,
                                   std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_test_two_sample: empty");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  return {d, kolmogorov_tail(lambda)};
}

// ---------------------------------------------------------------------------
// Discrete-law comparisons

/// Total variation between empirical counts and a reference pmf (the pmf mass
/// beyond the histogram range counts as unmatched).
inline double total_variation(const std::vector<std::size_t>& counts,
                              const std::vector<double>& pmf) {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  if (n == 0) throw std::invalid_argument("total_variation: no samples");
  double tv = 0.0;
  const std::size_t len = std::max(counts.size(), pmf.size());
  for (std::size_t k = 0; k < len; ++k) {
    const double emp =
        k < counts.size() ? static_cast<double>(counts[k]) / n : 0.0;
    const double ref = k < pmf.size() ? pmf[k] : 0.0;
    tv += std::abs(emp - ref);
  }
  return tv / 2.0;
}

struct ChiSquareResult {
  double statistic;
  double df;
  double p_value;
};

/// Chi-square goodness of fit of counts against a pmf; bins with expected
/// count below `min_expected` are pooled into the tail.
inline ChiSquareResult chi_square_test(const std::vector<std::size_t>& counts,
                                       const std::vector<double>& pmf,
                                       double min_expected = 5.0) {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  if (n == 0) throw std::invalid_argument("chi_square_test: no samples");
  std::vector<double> expected;
  std::vector<double> observed;
  double tail_exp = static_cast<double>(n);
  double tail_obs = static_cast<double>(n);
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double e = pmf[k] * static_cast<double>(n);
    if (e < min_expected) break;
    const double o = k < counts.size() ? static_cast<double>(counts[k]) : 0.0;
    expected.push_back(e);
    observed.push_back(o);
    tail_exp -= e;
    tail_obs -= o;
  }
  if (expected.size() < 2)
    throw std::invalid_argument("chi_square_test: too few usable bins");
  if (tail_exp > 0.5) {
    expected.push_back(tail_exp);
    observed.push_back(std::max(tail_obs, 0.0));
  }
  double stat = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const double diff = observed[k] - expected[k];
    stat += diff * diff / expected[k];
  }
  const double df = static_cast<double>(expected.size() - 1);
  return {stat, df, chi_square_tail(stat, df)};
}

}  // namespace bridgestein
