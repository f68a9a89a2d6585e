#pragma once

// Level-dependent jump rates and the path density of a non-homogeneous walk
// relative to the unit-rate one. For a piecewise-constant bridge path X with
// up-jump rate a(.) and down-jump rate b(.),
//
//   log M(X) = -int_0^1 (a + b)(X_t) dt
//              + sum over up jumps log a(X_{t-}) + sum over down jumps
//              log b(X_{s-}),
//
// evaluated exactly as a finite sum of level durations. The ratio
// H(U, r, s) = M(path of move(U, r, s)) / M(path of U) drives the thinned
// birth kernel of the non-homogeneous chain.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "bridgestein/config.hpp"

namespace bridgestein {

struct LevelRates {
  std::function<double(long long)> up;    // a(j)
  std::function<double(long long)> down;  // b(j)
};

inline LevelRates unit_rates() {
  return {[](long long) { return 1.0; }, [](long long) { return 1.0; }};
}

/// Alternating rates with constant total rate. a(j) = c0 (1 + d (-1)^j),
/// b(j) = c0 (1 - d (-1)^j), so a + b = 2 c0 everywhere while the products
/// a(j) b(j+1) alternate between nu and mu.
inline LevelRates alternating_constant_speed_rates(double mu, double nu) {
  if (!(mu >= nu && nu > 0.0))
    throw std::invalid_argument("constant-speed rates: need mu >= nu > 0");
  const double c0 = (std::sqrt(mu) + std::sqrt(nu)) / 2.0;
  const double d = (std::sqrt(mu) - std::sqrt(nu)) / (std::sqrt(mu) + std::sqrt(nu));
  auto sign = [](long long j) { return j % 2 == 0 ? 1.0 : -1.0; };
  return {[=](long long j) { return c0 * (1.0 + d * sign(j)); },
          [=](long long j) { return c0 * (1.0 - d * sign(j)); }};
}

/// Alternating reversible rates: a(j) = b(j) = exp(c (-1)^j) gives
/// a(j) b(j+1) = 1 while |(a+b)(j+1) - (a+b)(j)| = 4 sinh(c) = kappa.
inline LevelRates alternating_reversible_rates(double kappa) {
  if (kappa <= 0.0) throw std::invalid_argument("reversible rates: kappa");
  const double c = std::asinh(kappa / 4.0);
  auto rate = [c](long long j) {
    return std::exp(j % 2 == 0 ? c : -c);
  };
  return {rate, rate};
}

inline double log_density_m(const LatticeConfig& config,
                            const LevelRates& rates) {
  const PathZ path = reconstruct_path(config);
  double log_m = 0.0;
  double integral = 0.0;
  long long level = 0;
  double prev_time = 0.0;
  auto total_rate = [&](long long j) {
    const double a = rates.up(j);
    const double b = rates.down(j);
    if (a <= 0.0 || b <= 0.0)
      throw std::invalid_argument("log_density_m: nonpositive rate");
    return a + b;
  };
  for (std::size_t k = 0; k < path.size(); ++k) {
    integral += total_rate(level) * (path.jump_times[k] - prev_time);
    if (path.jump_signs[k] > 0) {
      log_m += std::log(rates.up(level));
      ++level;
    } else {
      log_m += std::log(rates.down(level));
      --level;
    }
    prev_time = path.jump_times[k];
  }
  integral += total_rate(level) * (1.0 - prev_time);
  return log_m - integral;
}

/// log M(path with the pair (r, s) added) - log M(path), computed from the
/// shifted window only: the existing jumps keep their times, the levels
/// inside [min(r,s), max(r,s)) move by one, and the two new jump factors
/// enter at their pre-jump levels. Exact cancellation on equivalence loci
/// (for unit rates every term vanishes identically).
inline double log_density_ratio_added(const LatticeConfig& config, double r,
                                      double s, const LevelRates& rates) {
  const double lo = std::min(r, s);
  const double hi = std::max(r, s);
  const long long shift = r < s ? 1 : -1;
  const PathZ path = reconstruct_path(config);

  double total = 0.0;
  long long level = 0;
  long long level_before_lo = 0, level_before_hi = 0;
  double prev = 0.0;
  auto xi = [&](long long j) {
    const double a = rates.up(j);
    const double b = rates.down(j);
    if (a <= 0.0 || b <= 0.0)
      throw std::invalid_argument("density ratio: nonpositive rate");
    return a + b;
  };
  for (std::size_t k = 0; k <= path.size(); ++k) {
    const double t = k < path.size() ? path.jump_times[k] : 1.0;
    // constant segment [prev, t) at `level`
    const double seg_lo = std::max(prev, lo);
    const double seg_hi = std::min(t, hi);
    if (seg_hi > seg_lo)
      total -= (xi(level + shift) - xi(level)) * (seg_hi - seg_lo);
    if (lo > prev && lo <= t) level_before_lo = level;
    if (hi > prev && hi <= t) level_before_hi = level;
    if (k == path.size()) break;
    if (t > lo && t < hi) {
      // an existing jump inside the window sees its pre-level shifted
      if (path.jump_signs[k] > 0)
        total += std::log(rates.up(level + shift)) -
                 std::log(rates.up(level));
      else
        total += std::log(rates.down(level + shift)) -
                 std::log(rates.down(level));
    }
    level += path.jump_signs[k];
    prev = t;
  }
  if (shift > 0) {
    total += std::log(rates.up(level_before_lo)) +
             std::log(rates.down(level_before_hi + 1));
  } else {
    total += std::log(rates.down(level_before_lo)) +
             std::log(rates.up(level_before_hi - 1));
  }
  return total;
}

/// H(U, r, s) for a move that is a genuine addition or removal; mixed
/// membership is rejected because the move would be the identity.
inline double density_ratio_h(const LatticeConfig& config, double r, double s,
                              const LevelRates& rates) {
  check_move_args(r, s);
  const bool has_r = detail::sorted_member(config.up, r);
  const bool has_s = detail::sorted_member(config.down, s);
  if (has_r != has_s)
    throw std::invalid_argument("density_ratio_h: move is the identity");
  if (!has_r) {
    // a time sitting on the opposite side also makes the move the identity
    if (detail::sorted_member(config.down, r) ||
        detail::sorted_member(config.up, s))
      throw std::invalid_argument("density_ratio_h: move is the identity");
    return std::exp(log_density_ratio_added(config, r, s, rates));
  }
  const LatticeConfig removed = apply_move(config, r, s);
  return std::exp(-log_density_ratio_added(removed, r, s, rates));
}

}  // namespace bridgestein
