#pragma once

// Shared helpers for the test suites. Oracles here are intentionally
// independent of the library implementation paths they check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace test_support {

/// Quadrature oracle for the modified Bessel function of order zero:
/// (1/pi) int_0^pi exp(x cos(theta)) d theta, composite Simpson.
inline double bessel_i0_integral_oracle(double x, std::size_t panels = 4096) {
  const double a = 0.0, b = std::numbers::pi;
  const std::size_t n = 2 * panels;
  const double h = (b - a) / static_cast<double>(n);
  auto f = [x](double theta) { return std::exp(x * std::cos(theta)); };
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i)
    sum += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0 / std::numbers::pi;
}

/// Brute-force assignment oracle: minimum over all permutations (n <= 8).
inline double brute_force_assignment(
    const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i][perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Histogram of nonnegative integer samples.
inline std::vector<std::size_t> histogram(const std::vector<long long>& xs) {
  std::vector<std::size_t> counts;
  for (long long x : xs) {
    if (x < 0) continue;
    if (static_cast<std::size_t>(x) >= counts.size())
      counts.resize(static_cast<std::size_t>(x) + 1, 0);
    ++counts[static_cast<std::size_t>(x)];
  }
  return counts;
}

/// Scan oracle for the rightmost positive root: one million equispaced
/// points, rightmost sign change, then bisection.
template <class Poly>
inline double scan_oracle_root(const Poly& p) {
  double upper = 1.0;
  while (!(p(upper) > 0.0)) upper *= 2.0;
  upper *= 2.0;
  const std::size_t points = 1000000;
  double lo = -1.0, hi = -1.0;
  for (std::size_t k = points; k-- > 1;) {
    const double x = upper * static_cast<double>(k) / points;
    if (p(x) <= 0.0) {
      lo = x;
      hi = upper * static_cast<double>(k + 1) / points;
      break;
    }
  }
  if (lo < 0.0) return 0.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(1.0, hi);
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (p(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace test_support
