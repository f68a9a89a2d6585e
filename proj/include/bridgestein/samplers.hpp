#pragma once

// Exact draws from the bridge laws, used as ground truth against the chain
// simulators, plus an independence Metropolis-Hastings sampler targeting the
// non-homogeneous bridge through its path density.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bridgestein/config.hpp"
#include "bridgestein/oracles.hpp"
#include "bridgestein/rates.hpp"
#include "bridgestein/rng.hpp"

namespace bridgestein {

namespace detail {

/// Inverse-CDF draw from a truncated pmf.
inline std::size_t sample_index(const std::vector<double>& pmf, Rng& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    acc += pmf[k];
    if (u < acc) return k;
  }
  return pmf.size() - 1;
}

inline std::vector<double> sorted_uniform_times(std::size_t count, Rng& rng) {
  std::vector<double> times(count);
  for (auto& t : times) t = rng.open01();
  std::sort(times.begin(), times.end());
  for (std::size_t i = 1; i < times.size(); ++i)
    while (times[i] <= times[i - 1]) times[i] = std::nextafter(times[i], 1.0);
  return times;
}

}  // namespace detail

/// Bridge of the two-state walk with rate alpha: jump count is a rate-alpha
/// Poisson conditioned to be even, jump times i.i.d. uniform.
inline HypercubeConfig sample_hypercube_bridge(double alpha, Rng& rng) {
  const IntegerLaw law = hypercube_pair_count_law(alpha, 1e-15);
  const std::size_t pairs = detail::sample_index(law.pmf, rng);
  return HypercubeConfig{detail::sorted_uniform_times(2 * pairs, rng)};
}

/// Bridge of the walk with rates j+, j-: the pair count follows the
/// diagonal-conditioned Poisson law with parameter j+ j-, times i.i.d.
/// uniform on each side.
inline LatticeConfig sample_lattice_bridge(double j_plus, double j_minus,
                                           Rng& rng) {
  if (j_plus <= 0.0 || j_minus <= 0.0)
    throw std::invalid_argument("lattice bridge sampler: rates");
  const IntegerLaw law = poisson_diag_law(j_plus * j_minus, 1e-15);
  const std::size_t pairs = detail::sample_index(law.pmf, rng);
  LatticeConfig config;
  config.up = detail::sorted_uniform_times(pairs, rng);
  while (true) {
    config.down = detail::sorted_uniform_times(pairs, rng);
    bool disjoint = true;
    for (double t : config.down)
      disjoint = disjoint && !detail::sorted_member(config.up, t);
    if (disjoint) break;
  }
  return config;
}

inline HypercubeConfig sample_hypercube_bridge(double alpha,
                                               std::uint64_t seed,
                                               std::uint64_t stream = 0) {
  Rng rng(seed, stream);
  return sample_hypercube_bridge(alpha, rng);
}

inline LatticeConfig sample_lattice_bridge(double j_plus, double j_minus,
                                           std::uint64_t seed,
                                           std::uint64_t stream = 0) {
  Rng rng(seed, stream);
  return sample_lattice_bridge(j_plus, j_minus, rng);
}

// ---------------------------------------------------------------------------
// Scheme bridge: N slots, each holding a +1/-1/0 jump with probabilities
// 1/N, 1/N, 1-2/N and a uniform time inside its slot; rejection onto the
// event that the signs cancel.

struct SchemeDraw {
  LatticeConfig config;
  std::size_t attempts = 0;
};

inline SchemeDraw sample_scheme_bridge(int n_blocks, Rng& rng) {
  if (n_blocks < 3) throw std::invalid_argument("scheme sampler: N < 3");
  SchemeDraw draw;
  while (true) {
    ++draw.attempts;
    std::vector<double> up, down;
    int total = 0;
    for (int j = 0; j < n_blocks; ++j) {
      const double u = rng.uniform01();
      if (u >= 2.0 / n_blocks) continue;
      const double time = (j + rng.open01()) / n_blocks;
      if (u < 1.0 / n_blocks) {
        up.push_back(time);
        ++total;
      } else {
        down.push_back(time);
        --total;
      }
    }
    if (total != 0) continue;
    draw.config = LatticeConfig{std::move(up), std::move(down)};
    return draw;
  }
}

inline LatticeConfig sample_scheme_bridge(int n_blocks, std::uint64_t seed,
                                          std::uint64_t stream = 0) {
  Rng rng(seed, stream);
  return sample_scheme_bridge(n_blocks, rng).config;
}

// ---------------------------------------------------------------------------
// Independence MH targeting the non-homogeneous bridge law. Proposals come
// from the unit-rate exact sampler; acceptance is min(1, M(prop) / M(cur)).
// Unit rates make every proposal accepted, so the sampler degrades to i.i.d.
// exact draws in that case.

class NonhomogeneousBridgeMh {
 public:
  NonhomogeneousBridgeMh(LevelRates rates, std::uint64_t seed,
                         std::uint64_t stream = 0, std::size_t burn_in = 1000,
                         std::size_t thinning = 10)
      : rates_(std::move(rates)),
        rng_(seed, stream),
        thinning_(thinning == 0 ? 1 : thinning) {
    current_ = sample_lattice_bridge(1.0, 1.0, rng_);
    log_m_current_ = log_density_m(current_, rates_);
    for (std::size_t i = 0; i < burn_in; ++i) step();
  }

  /// Next retained state (advances `thinning` raw steps).
  const LatticeConfig& next() {
    for (std::size_t i = 0; i < thinning_; ++i) step();
    return current_;
  }

  const LatticeConfig& current() const { return current_; }
  double log_m_current() const { return log_m_current_; }

  double acceptance_rate() const {
    return proposals_ == 0
               ? 0.0
               : static_cast<double>(accepted_) / static_cast<double>(proposals_);
  }

 private:
  void step() {
    const LatticeConfig proposal = sample_lattice_bridge(1.0, 1.0, rng_);
    const double log_m_prop = log_density_m(proposal, rates_);
    ++proposals_;
    if (std::log(rng_.open01()) < log_m_prop - log_m_current_) {
      current_ = proposal;
      log_m_current_ = log_m_prop;
      ++accepted_;
    }
  }

  LevelRates rates_;
  Rng rng_;
  std::size_t thinning_;
  LatticeConfig current_;
  double log_m_current_ = 0.0;
  std::size_t proposals_ = 0;
  std::size_t accepted_ = 0;
};

}  // namespace bridgestein
