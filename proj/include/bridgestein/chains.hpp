#pragma once

// Continuous-time Markov chains on jump-time configurations, simulated in
// jump-chain (Gillespie) form: exponential holding times at the state's total
// rate, then a kernel draw. Each simulator is a pure function of its
// parameters and RNG stream.
//
//   hypercube:   hold rate alpha^2/2 + C(|U|, 2); births add an ordered
//                uniform pair from the triangle r < s, deaths remove a
//                uniform 2-subset of U.
//   lattice:     hold rate j+ j- + |U+||U-|; births add a uniform pair of
//                (0,1)^2, deaths remove a uniform element of U+ x U-.
//   nonhomog.:   deaths as the lattice chain; births proposed at a majorant
//                rate and thinned with probability H / majorant.
//   scheme:      births restricted to pairs of distinct unoccupied blocks of
//                a 1/N grid, at rate (1 - 2/N)^{-2} times the admissible
//                area; at most one jump ever occupies a block.
//   birth-death: integer chain with birth rate lambda and death rate n^2
//                (the pair-count projection of the lattice dynamics).

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bridgestein/config.hpp"
#include "bridgestein/rates.hpp"
#include "bridgestein/rng.hpp"

namespace bridgestein {

/// Thrown when a thinning proposal exceeds its majorant; continuing would
/// silently bias the chain, so the run aborts.
struct ThinningMajorantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MoveEvent {
  double time;
  bool add;
  double r, s;  // hypercube: r < s; lattice: r is the up time, s the down
};

template <class Config>
struct Trajectory {
  Config initial;
  std::vector<MoveEvent> events;
  std::vector<Config> states;  // state after each event

  const Config& final_state() const {
    return states.empty() ? initial : states.back();
  }

  /// State at time t (last event at or before t).
  const Config& state_at(double t) const {
    std::size_t lo = 0, hi = events.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (events[mid].time <= t)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo == 0 ? initial : states[lo - 1];
  }

  std::size_t events_up_to(double t) const {
    std::size_t count = 0;
    for (const auto& e : events) {
      if (e.time > t) break;
      ++count;
    }
    return count;
  }
};

using HypercubeTrajectory = Trajectory<HypercubeConfig>;
using LatticeTrajectory = Trajectory<LatticeConfig>;

struct BirthDeathTrajectory {
  long long initial;
  std::vector<double> event_times;
  std::vector<long long> values;  // value after each event

  long long final_value() const {
    return values.empty() ? initial : values.back();
  }
};

namespace detail {

inline void check_t_end(double t_end) {
  if (t_end < 0.0) throw std::invalid_argument("t_end < 0");
}

inline double binom2(std::size_t n) {
  return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1 + (n == 0));
}

}  // namespace detail

inline double hypercube_holding_rate(const HypercubeConfig& config,
                                     double alpha) {
  return alpha * alpha / 2.0 + detail::binom2(config.size());
}

inline double lattice_holding_rate(const LatticeConfig& config, double j_plus,
                                   double j_minus) {
  return j_plus * j_minus + static_cast<double>(config.up.size()) *
                                static_cast<double>(config.down.size());
}

// ---------------------------------------------------------------------------
// Hypercube chain

template <class OnEvent>
inline HypercubeConfig simulate_hypercube_core(HypercubeConfig state,
                                               double alpha, double t_end,
                                               Rng& rng, OnEvent&& on_event) {
  if (alpha <= 0.0) throw std::invalid_argument("hypercube chain: alpha");
  detail::check_t_end(t_end);
  const double birth_rate = alpha * alpha / 2.0;
  double t = 0.0;
  while (true) {
    const double rate = hypercube_holding_rate(state, alpha);
    t += rng.exponential(rate);
    if (t > t_end) break;
    if (rng.uniform01() * rate < birth_rate) {
      const auto [r, s] = rng.ordered_pair01();
      if (state.contains(r) || state.contains(s)) continue;  // null set
      detail::sorted_insert(state.times, r);
      detail::sorted_insert(state.times, s);
      on_event(MoveEvent{t, true, r, s}, state);
    } else {
      const auto [i, j] = rng.index_pair(state.size());
      const double r = state.times[std::min(i, j)];
      const double s = state.times[std::max(i, j)];
      detail::sorted_erase(state.times, r);
      detail::sorted_erase(state.times, s);
      on_event(MoveEvent{t, false, r, s}, state);
    }
  }
  return state;
}

inline HypercubeTrajectory simulate_hypercube_chain(
    const HypercubeConfig& initial, double alpha, double t_end,
    std::uint64_t seed, std::uint64_t stream = 0) {
  HypercubeTrajectory out;
  out.initial = initial;
  Rng rng(seed, stream);
  simulate_hypercube_core(initial, alpha, t_end, rng,
                          [&](const MoveEvent& e, const HypercubeConfig& st) {
                            out.events.push_back(e);
                            out.states.push_back(st);
                          });
  return out;
}

// ---------------------------------------------------------------------------
// Lattice chain

template <class OnEvent>
inline LatticeConfig simulate_lattice_core(LatticeConfig state, double j_plus,
                                           double j_minus, double t_end,
                                           Rng& rng, OnEvent&& on_event) {
  if (j_plus <= 0.0 || j_minus <= 0.0)
    throw std::invalid_argument("lattice chain: rates");
  detail::check_t_end(t_end);
  const double birth_rate = j_plus * j_minus;
  double t = 0.0;
  while (true) {
    const double rate = lattice_holding_rate(state, j_plus, j_minus);
    t += rng.exponential(rate);
    if (t > t_end) break;
    if (rng.uniform01() * rate < birth_rate) {
      const double r = rng.open01();
      const double s = rng.open01();
      if (r == s) continue;  // diagonal has measure zero
      const LatticeConfig next = apply_move(state, r, s);
      if (next == state) continue;  // collision with an existing time
      state = next;
      on_event(MoveEvent{t, true, r, s}, state);
    } else {
      const auto i = static_cast<std::size_t>(rng.bounded(state.up.size()));
      const auto j = static_cast<std::size_t>(rng.bounded(state.down.size()));
      const double r = state.up[i];
      const double s = state.down[j];
      detail::sorted_erase(state.up, r);
      detail::sorted_erase(state.down, s);
      on_event(MoveEvent{t, false, r, s}, state);
    }
  }
  return state;
}

inline LatticeTrajectory simulate_lattice_chain(const LatticeConfig& initial,
                                                double j_plus, double j_minus,
                                                double t_end,
                                                std::uint64_t seed,
                                                std::uint64_t stream = 0) {
  LatticeTrajectory out;
  out.initial = initial;
  Rng rng(seed, stream);
  simulate_lattice_core(initial, j_plus, j_minus, t_end, rng,
                        [&](const MoveEvent& e, const LatticeConfig& st) {
                          out.events.push_back(e);
                          out.states.push_back(st);
                        });
  return out;
}

// ---------------------------------------------------------------------------
// Non-homogeneous chain (thinned births)

struct NonhomogeneousParams {
  LevelRates rates;
  double rate_sup = 1.0;  // upper bound on a, b over reachable levels
  // Optional exact per-state majorant of H over (0,1)^2. When absent a
  // probe-grid heuristic (max over 64 proposals, times 1.5) guards the
  // thinning; a proposal exceeding the majorant aborts the run.
  std::function<double(const LatticeConfig&)> birth_majorant;
};

namespace detail {

inline double probe_grid_majorant(const LatticeConfig& state,
                                  const NonhomogeneousParams& params) {
  double best = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const double u = (i + 0.5) / 8.0;
      const double v = (j + 0.5) / 8.0;
      if (sorted_member(state.up, u) || sorted_member(state.down, v))
        continue;
      best = std::max(
          best, std::exp(log_density_ratio_added(state, u, v, params.rates)));
    }
  return std::max(params.rate_sup * params.rate_sup, 1.5 * best);
}

}  // namespace detail

template <class OnEvent>
inline LatticeConfig simulate_nonhomogeneous_core(
    LatticeConfig state, const NonhomogeneousParams& params, double t_end,
    Rng& rng, OnEvent&& on_event) {
  detail::check_t_end(t_end);
  if (params.rate_sup <= 0.0)
    throw std::invalid_argument("nonhomogeneous chain: rate_sup");
  double t = 0.0;
  auto majorant_for = [&](const LatticeConfig& st) {
    return params.birth_majorant ? params.birth_majorant(st)
                                 : detail::probe_grid_majorant(st, params);
  };
  double majorant = majorant_for(state);
  while (true) {
    const double death_rate = static_cast<double>(state.up.size()) *
                              static_cast<double>(state.down.size());
    const double rate = majorant + death_rate;
    t += rng.exponential(rate);
    if (t > t_end) break;
    if (rng.uniform01() * rate < death_rate) {
      const auto i = static_cast<std::size_t>(rng.bounded(state.up.size()));
      const auto j = static_cast<std::size_t>(rng.bounded(state.down.size()));
      const double r = state.up[i];
      const double s = state.down[j];
      detail::sorted_erase(state.up, r);
      detail::sorted_erase(state.down, s);
      majorant = majorant_for(state);
      on_event(MoveEvent{t, false, r, s}, state);
    } else {
      const double r = rng.open01();
      const double s = rng.open01();
      if (r == s) continue;
      if (detail::sorted_member(state.up, r) ||
          detail::sorted_member(state.down, s) ||
          detail::sorted_member(state.down, r) ||
          detail::sorted_member(state.up, s))
        continue;  // collision with an existing time, a null event
      const double h =
          std::exp(log_density_ratio_added(state, r, s, params.rates));
      if (h > majorant * (1.0 + 1e-12))
        throw ThinningMajorantError(
            "thinning majorant violated: H exceeds the birth majorant");
      if (rng.uniform01() * majorant < h) {
        state = apply_move(state, r, s);
        majorant = majorant_for(state);
        on_event(MoveEvent{t, true, r, s}, state);
      }
    }
  }
  return state;
}

inline LatticeTrajectory simulate_nonhomogeneous_chain(
    const LatticeConfig& initial, const NonhomogeneousParams& params,
    double t_end, std::uint64_t seed, std::uint64_t stream = 0) {
  LatticeTrajectory out;
  out.initial = initial;
  Rng rng(seed, stream);
  simulate_nonhomogeneous_core(initial, params, t_end, rng,
                               [&](const MoveEvent& e,
                                   const LatticeConfig& st) {
                                 out.events.push_back(e);
                                 out.states.push_back(st);
                               });
  return out;
}

// ---------------------------------------------------------------------------
// Approximation-scheme chain

/// Block index of a time in (0,1): the k with t in ((k-1)/N, k/N].
inline int scheme_block(double t, int n_blocks) {
  const int k = static_cast<int>(std::ceil(t * n_blocks));
  return std::min(std::max(k, 1), n_blocks);
}

inline bool scheme_supported(const LatticeConfig& config, int n_blocks) {
  std::vector<char> occupied(n_blocks + 1, 0);
  for (const auto* side : {&config.up, &config.down})
    for (double t : *side) {
      const int k = scheme_block(t, n_blocks);
      if (occupied[k]) return false;
      occupied[k] = 1;
    }
  return true;
}

template <class OnEvent>
inline LatticeConfig simulate_scheme_core(LatticeConfig state, int n_blocks,
                                          double t_end, Rng& rng,
                                          OnEvent&& on_event) {
  if (n_blocks < 3) throw std::invalid_argument("scheme chain: N < 3");
  detail::check_t_end(t_end);
  if (!scheme_supported(state, n_blocks))
    throw std::invalid_argument("scheme chain: initial state not supported");
  const double inv_sq = 1.0 / ((1.0 - 2.0 / n_blocks) * (1.0 - 2.0 / n_blocks));
  std::vector<char> occupied(n_blocks + 1, 0);
  int n_free = n_blocks;
  auto occupy = [&](double time) {
    occupied[scheme_block(time, n_blocks)] = 1;
    --n_free;
  };
  auto release = [&](double time) {
    occupied[scheme_block(time, n_blocks)] = 0;
    ++n_free;
  };
  for (const auto* side : {&state.up, &state.down})
    for (double time : *side) occupy(time);

  double t = 0.0;
  while (true) {
    // admissible area: ordered pairs of distinct free blocks
    const double area = static_cast<double>(n_free) *
                        static_cast<double>(n_free - 1) /
                        (static_cast<double>(n_blocks) * n_blocks);
    const double birth_rate = inv_sq * area;
    const double death_rate = static_cast<double>(state.up.size()) *
                              static_cast<double>(state.down.size());
    const double rate = birth_rate + death_rate;
    if (rate <= 0.0) break;
    t += rng.exponential(rate);
    if (t > t_end) break;
    if (rng.uniform01() * rate < birth_rate) {
      // rejection against the admissible-pair predicate
      double r, s;
      while (true) {
        r = rng.open01();
        s = rng.open01();
        const int br = scheme_block(r, n_blocks);
        const int bs = scheme_block(s, n_blocks);
        if (br != bs && !occupied[br] && !occupied[bs]) break;
      }
      detail::sorted_insert(state.up, r);
      detail::sorted_insert(state.down, s);
      occupy(r);
      occupy(s);
      on_event(MoveEvent{t, true, r, s}, state);
    } else {
      const auto i = static_cast<std::size_t>(rng.bounded(state.up.size()));
      const auto j = static_cast<std::size_t>(rng.bounded(state.down.size()));
      const double r = state.up[i];
      const double s = state.down[j];
      detail::sorted_erase(state.up, r);
      detail::sorted_erase(state.down, s);
      release(r);
      release(s);
      on_event(MoveEvent{t, false, r, s}, state);
    }
  }
  return state;
}

inline LatticeTrajectory simulate_scheme_chain(const LatticeConfig& initial,
                                               int n_blocks, double t_end,
                                               std::uint64_t seed,
                                               std::uint64_t stream = 0) {
  LatticeTrajectory out;
  out.initial = initial;
  Rng rng(seed, stream);
  simulate_scheme_core(initial, n_blocks, t_end, rng,
                       [&](const MoveEvent& e, const LatticeConfig& st) {
                         out.events.push_back(e);
                         out.states.push_back(st);
                       });
  return out;
}

// ---------------------------------------------------------------------------
// Projected birth-death chain

inline BirthDeathTrajectory simulate_poisson_diag_chain(
    long long initial, double lambda, double t_end, std::uint64_t seed,
    std::uint64_t stream = 0) {
  if (initial < 0) throw std::invalid_argument("birth-death chain: n0 < 0");
  if (lambda <= 0.0) throw std::invalid_argument("birth-death chain: lambda");
  detail::check_t_end(t_end);
  Rng rng(seed, stream);
  BirthDeathTrajectory out;
  out.initial = initial;
  long long n = initial;
  double t = 0.0;
  while (true) {
    const double death = static_cast<double>(n) * static_cast<double>(n);
    const double rate = lambda + death;
    t += rng.exponential(rate);
    if (t > t_end) break;
    n += rng.uniform01() * rate < lambda ? 1 : -1;
    out.event_times.push_back(t);
    out.values.push_back(n);
  }
  return out;
}

}  // namespace bridgestein
