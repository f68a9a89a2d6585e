#pragma once

// Empirical 1-Wasserstein distance between equal-size uniform samples of
// configurations under the graph metric: the minimum-cost perfect matching
// divided by the sample size. The assignment is solved exactly with the
// O(n^3) potential (Jonker-Volgenant style) algorithm.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bridgestein/distance.hpp"
#include "bridgestein/rng.hpp"
#include "bridgestein/stats.hpp"

namespace bridgestein {

inline constexpr std::size_t kAssignmentMaxSize = 512;

struct Assignment {
  std::vector<int> row_to_col;
  double cost = 0.0;
};

/// Exact minimum-cost perfect matching of a square nonnegative cost matrix.
inline Assignment assignment_solve(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) throw std::invalid_argument("assignment_solve: empty matrix");
  if (n > kAssignmentMaxSize)
    throw std::invalid_argument("assignment_solve: matrix too large");
  for (const auto& row : cost)
    if (row.size() != n)
      throw std::invalid_argument("assignment_solve: matrix not square");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0);  // column -> row (1-based)
  std::vector<std::size_t> way(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> min_slack(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (reduced < min_slack[j]) {
          min_slack[j] = reduced;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.row_to_col.assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j)
    if (match[j] != 0) out.row_to_col[match[j] - 1] = static_cast<int>(j - 1);
  for (std::size_t i = 0; i < n; ++i)
    out.cost += cost[i][static_cast<std::size_t>(out.row_to_col[i])];
  return out;
}

// ---------------------------------------------------------------------------

struct W1Estimate {
  double estimate = 0.0;
  double bootstrap_se = 0.0;
  std::size_t n = 0;
};

inline constexpr std::size_t kBootstrapRepetitions = 50;

/// Matching-based W1 between two equal-size samples; the bootstrap resamples
/// both index sets and re-solves on the cached cost matrix.
template <class Config>
inline W1Estimate empirical_w1(const std::vector<Config>& a,
                               const std::vector<Config>& b,
                               std::uint64_t seed) {
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument("empirical_w1: samples must be equal-size");
  if (a.size() > kAssignmentMaxSize)
    throw std::invalid_argument("empirical_w1: sample too large");
  const std::size_t n = a.size();

  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost[i][j] = static_cast<double>(graph_distance(a[i], b[j]));

  W1Estimate out;
  out.n = n;
  out.estimate = assignment_solve(cost).cost / static_cast<double>(n);

  Rng rng(seed);
  RunningStat boot;
  std::vector<std::vector<double>> resampled(n, std::vector<double>(n));
  for (std::size_t rep = 0; rep < kBootstrapRepetitions; ++rep) {
    std::vector<std::size_t> rows(n), cols(n);
    for (auto& r : rows) r = static_cast<std::size_t>(rng.bounded(n));
    for (auto& c : cols) c = static_cast<std::size_t>(rng.bounded(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        resampled[i][j] = cost[rows[i]][cols[j]];
    boot.add(assignment_solve(resampled).cost / static_cast<double>(n));
  }
  out.bootstrap_se = boot.stddev();
  return out;
}

}  // namespace bridgestein
