#pragma once

// Synchronized coupling of two chains started at neighboring configurations.
//
// The bigger chain B carries one extra pair {r, s}; the smaller chain S reads
// the same birth process and the same removal clocks for the pairs it shares
// with B. Writing T_m for the first removal that touches {r, s} and T_M for
// the first later removal involving the surviving point zeta, the coupled
// distance is exactly
//
//     d(B_t, S_t) = 1_{t < T_m} + 2 * 1_{T_m <= t < T_M},
//
// and T_m = T_M exactly when the pair {r, s} itself dies. Between T_m and
// T_M the chains differ by a transposition zeta <-> eta, and S draws the
// clock of its pair through that relabelling; since the pair clocks are
// i.i.d. exponential, relabelling preserves the law of the noise and each
// marginal remains a chain of the single-chain law. Clocks are realized
// lazily through the memoryless property: at every jump the competition is
// redrawn among the currently live pairs.
//
// A coalescing event at T_M removes different pairs from the two chains and
// is recorded as one event touching both.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bridgestein/chains.hpp"
#include "bridgestein/config.hpp"
#include "bridgestein/parallel.hpp"
#include "bridgestein/rng.hpp"

namespace bridgestein {

struct CoupledEvent {
  double time;
  bool touches_u, touches_v;
  bool add;
  // the pair acted on in each chain; identical except at the coalescing event
  double u_r = 0.0, u_s = 0.0;
  double v_r = 0.0, v_s = 0.0;
};

template <class Config>
struct CoupledTrajectory {
  Config u_initial, v_initial;
  std::vector<CoupledEvent> events;
  std::vector<Config> u_states, v_states;  // after each event
  double t_m = std::numeric_limits<double>::infinity();
  double t_big = std::numeric_limits<double>::infinity();  // T_M
  bool coalesced = false;

  /// Coupled distance implied by the clock construction.
  int distance_at(double t) const {
    if (t < t_m) return 1;
    return t < t_big ? 2 : 0;
  }

  std::size_t u_events_up_to(double t) const {
    std::size_t n = 0;
    for (const auto& e : events) {
      if (e.time > t) break;
      if (e.touches_u) ++n;
    }
    return n;
  }

  std::size_t v_events_up_to(double t) const {
    std::size_t n = 0;
    for (const auto& e : events) {
      if (e.time > t) break;
      if (e.touches_v) ++n;
    }
    return n;
  }
};

// ---------------------------------------------------------------------------
// Hypercube coupling

inline CoupledTrajectory<HypercubeConfig> simulate_coupled_hypercube(
    const HypercubeConfig& v_start, double r, double s, double alpha,
    double t_end, std::uint64_t seed, std::uint64_t stream = 0) {
  check_move_args(r, s);
  if (alpha <= 0.0) throw std::invalid_argument("coupling: alpha");
  if (r > s) std::swap(r, s);
  const HypercubeConfig u_start = apply_move(v_start, r, s);
  if (u_start == v_start)
    throw std::invalid_argument("coupling: move is the identity at V");

  // big = the configuration containing the pair {r, s}
  const bool u_is_big = u_start.size() > v_start.size();
  HypercubeConfig big = u_is_big ? u_start : v_start;
  HypercubeConfig small = u_is_big ? v_start : u_start;

  CoupledTrajectory<HypercubeConfig> out;
  out.u_initial = u_start;
  out.v_initial = v_start;
  Rng rng(seed, stream);
  const double birth_rate = alpha * alpha / 2.0;

  auto record = [&](const CoupledEvent& tagged) {
    CoupledEvent e = tagged;
    if (!u_is_big) {
      std::swap(e.touches_u, e.touches_v);
      std::swap(e.u_r, e.v_r);
      std::swap(e.u_s, e.v_s);
    }
    out.events.push_back(e);
    out.u_states.push_back(u_is_big ? big : small);
    out.v_states.push_back(u_is_big ? small : big);
  };

  double t = 0.0;
  int phase = 1;     // 1: d == 1, 2: d == 2, 3: coalesced
  double zeta = 0.0; // survivor of {r, s} in the big chain (phase 2)
  double eta = 0.0;  // its counterpart private to the small chain (phase 2)

  while (true) {
    const double rate = hypercube_holding_rate(big, alpha);
    t += rng.exponential(rate);
    if (t > t_end) break;
    if (rng.uniform01() * rate < birth_rate) {
      const auto [a, b] = rng.ordered_pair01();
      if (big.contains(a) || big.contains(b) || small.contains(a) ||
          small.contains(b))
        continue;
      detail::sorted_insert(big.times, a);
      detail::sorted_insert(big.times, b);
      if (phase == 3) {
        small = big;
      } else {
        detail::sorted_insert(small.times, a);
        detail::sorted_insert(small.times, b);
      }
      record({t, true, true, true, a, b, a, b});
      continue;
    }
    const auto [i, j] = rng.index_pair(big.size());
    const double x = big.times[std::min(i, j)];
    const double y = big.times[std::max(i, j)];
    if (phase == 1) {
      const bool hits_r = x == r || y == r;
      const bool hits_s = x == s || y == s;
      detail::sorted_erase(big.times, x);
      detail::sorted_erase(big.times, y);
      if (!hits_r && !hits_s) {
        detail::sorted_erase(small.times, x);
        detail::sorted_erase(small.times, y);
        record({t, true, true, false, x, y, x, y});
      } else if (hits_r && hits_s) {
        // the extra pair dies: chains coincide from now on
        out.t_m = out.t_big = t;
        out.coalesced = true;
        phase = 3;
        record({t, true, false, false, x, y, x, y});
        small = big;
      } else {
        out.t_m = t;
        zeta = hits_r ? s : r;
        eta = x == r || x == s ? y : x;
        // small loses eta implicitly: it keeps it while big dropped both
        phase = 2;
        record({t, true, false, false, x, y, x, y});
      }
    } else if (phase == 2) {
      const bool hits_zeta = x == zeta || y == zeta;
      detail::sorted_erase(big.times, x);
      detail::sorted_erase(big.times, y);
      if (!hits_zeta) {
        detail::sorted_erase(small.times, x);
        detail::sorted_erase(small.times, y);
        record({t, true, true, false, x, y, x, y});
      } else {
        // clock relabelling: {zeta, w} in big pairs with {eta, w} in small
        const double w = x == zeta ? y : x;
        const double small_x = std::min(eta, w);
        const double small_y = std::max(eta, w);
        detail::sorted_erase(small.times, eta);
        detail::sorted_erase(small.times, w);
        out.t_big = t;
        out.coalesced = true;
        phase = 3;
        record({t, true, true, false, x, y, small_x, small_y});
        small = big;
      }
    } else {
      detail::sorted_erase(big.times, x);
      detail::sorted_erase(big.times, y);
      small = big;
      record({t, true, true, false, x, y, x, y});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lattice coupling. The surviving point zeta and its counterpart eta live on
// the same side (up or down); a removal pairs one up time with one down time.

inline CoupledTrajectory<LatticeConfig> simulate_coupled_lattice(
    const LatticeConfig& v_start, double r, double s, double j_plus,
    double j_minus, double t_end, std::uint64_t seed,
    std::uint64_t stream = 0) {
  check_move_args(r, s);
  if (j_plus <= 0.0 || j_minus <= 0.0)
    throw std::invalid_argument("coupling: rates");
  const LatticeConfig u_start = apply_move(v_start, r, s);
  if (u_start == v_start)
    throw std::invalid_argument("coupling: move is the identity at V");

  const bool u_is_big = u_start.up.size() > v_start.up.size();
  LatticeConfig big = u_is_big ? u_start : v_start;
  LatticeConfig small = u_is_big ? v_start : u_start;

  CoupledTrajectory<LatticeConfig> out;
  out.u_initial = u_start;
  out.v_initial = v_start;
  Rng rng(seed, stream);
  const double birth_rate = j_plus * j_minus;

  auto record = [&](const CoupledEvent& tagged) {
    CoupledEvent e = tagged;
    if (!u_is_big) {
      std::swap(e.touches_u, e.touches_v);
      std::swap(e.u_r, e.v_r);
      std::swap(e.u_s, e.v_s);
    }
    out.events.push_back(e);
    out.u_states.push_back(u_is_big ? big : small);
    out.v_states.push_back(u_is_big ? small : big);
  };

  double t = 0.0;
  int phase = 1;
  bool zeta_up = false;  // side of the surviving point in phase 2
  double zeta = 0.0, eta = 0.0;

  while (true) {
    const double rate = lattice_holding_rate(big, j_plus, j_minus);
    t += rng.exponential(rate);
    if (t > t_end) break;
    if (rng.uniform01() * rate < birth_rate) {
      const double a = rng.open01();
      const double b = rng.open01();
      if (a == b) continue;
      const LatticeConfig big_next = apply_move(big, a, b);
      if (big_next == big) continue;
      if (phase != 3) {
        const LatticeConfig small_next = apply_move(small, a, b);
        if (small_next == small) continue;
        small = small_next;
      }
      big = big_next;
      if (phase == 3) small = big;
      record({t, true, true, true, a, b, a, b});
      continue;
    }
    const auto i = static_cast<std::size_t>(rng.bounded(big.up.size()));
    const auto j = static_cast<std::size_t>(rng.bounded(big.down.size()));
    const double x = big.up[i];    // up time removed from big
    const double y = big.down[j];  // down time removed from big
    if (phase == 1) {
      const bool hits_r = x == r;
      const bool hits_s = y == s;
      detail::sorted_erase(big.up, x);
      detail::sorted_erase(big.down, y);
      if (!hits_r && !hits_s) {
        detail::sorted_erase(small.up, x);
        detail::sorted_erase(small.down, y);
        record({t, true, true, false, x, y, x, y});
      } else if (hits_r && hits_s) {
        out.t_m = out.t_big = t;
        out.coalesced = true;
        phase = 3;
        record({t, true, false, false, x, y, x, y});
        small = big;
      } else {
        out.t_m = t;
        // r lives on the up side, s on the down side. If the removal took r,
        // the survivor zeta is s on the down side and eta is the down time y
        // that died with it; otherwise zeta = r and eta is the up time x.
        if (hits_r) {
          zeta_up = false;
          zeta = s;
          eta = y;
        } else {
          zeta_up = true;
          zeta = r;
          eta = x;
        }
        phase = 2;
        record({t, true, false, false, x, y, x, y});
      }
    } else if (phase == 2) {
      const bool hits_zeta = zeta_up ? x == zeta : y == zeta;
      detail::sorted_erase(big.up, x);
      detail::sorted_erase(big.down, y);
      if (!hits_zeta) {
        detail::sorted_erase(small.up, x);
        detail::sorted_erase(small.down, y);
        record({t, true, true, false, x, y, x, y});
      } else {
        const double small_x = zeta_up ? eta : x;
        const double small_y = zeta_up ? y : eta;
        detail::sorted_erase(small.up, small_x);
        detail::sorted_erase(small.down, small_y);
        out.t_big = t;
        out.coalesced = true;
        phase = 3;
        record({t, true, true, false, x, y, small_x, small_y});
        small = big;
      }
    } else {
      detail::sorted_erase(big.up, x);
      detail::sorted_erase(big.down, y);
      small = big;
      record({t, true, true, false, x, y, x, y});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contraction curve: Monte Carlo estimate of E d(U_t, V_t) from neighboring
// starts, against the envelope 4 exp(-t/2) + exp(-t).

struct ContractionCurve {
  std::vector<double> t;
  std::vector<double> mean_distance;
  std::vector<double> standard_error;
  std::vector<double> envelope;  // 4 exp(-t/2) + exp(-t)
};

inline double contraction_envelope(double t) {
  return 4.0 * std::exp(-t / 2.0) + std::exp(-t);
}

struct ContractionParams {
  bool hypercube = true;
  double alpha = 1.0;              // hypercube rate
  double j_plus = 1.0, j_minus = 1.0;  // lattice rates
};

inline ContractionCurve estimate_contraction(const ContractionParams& params,
                                             const std::vector<double>& t_grid,
                                             std::size_t replicas,
                                             std::uint64_t seed) {
  if (t_grid.empty()) throw std::invalid_argument("contraction: empty grid");
  if (replicas < 100) throw std::invalid_argument("contraction: replicas");
  double t_max = 0.0;
  for (double t : t_grid) t_max = std::max(t_max, t);

  std::vector<std::vector<int>> distances(replicas);
  parallel_replicas(replicas, [&](std::size_t rep) {
    Rng pick(seed, rep);
    const auto [r, s] = pick.ordered_pair01();
    std::vector<int> row(t_grid.size());
    if (params.hypercube) {
      const auto coupled = simulate_coupled_hypercube(
          HypercubeConfig{}, r, s, params.alpha, t_max, seed, replicas + rep);
      for (std::size_t k = 0; k < t_grid.size(); ++k)
        row[k] = coupled.distance_at(t_grid[k]);
    } else {
      const auto coupled =
          simulate_coupled_lattice(LatticeConfig{}, r, s, params.j_plus,
                                   params.j_minus, t_max, seed, replicas + rep);
      for (std::size_t k = 0; k < t_grid.size(); ++k)
        row[k] = coupled.distance_at(t_grid[k]);
    }
    distances[rep] = std::move(row);
  });

  ContractionCurve curve;
  curve.t = t_grid;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t rep = 0; rep < replicas; ++rep) {
      sum += distances[rep][k];
      sum_sq += static_cast<double>(distances[rep][k]) * distances[rep][k];
    }
    const double n = static_cast<double>(replicas);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    curve.mean_distance.push_back(mean);
    curve.standard_error.push_back(std::sqrt(var / n));
    curve.envelope.push_back(contraction_envelope(t_grid[k]));
  }
  return curve;
}

}  // namespace bridgestein
