#pragma once

// Graph distance on configuration spaces under the pair moves.
//
// Two configurations are neighbors when one pair move maps one to the other;
// the metric is the shortest-path length in that graph. Only the membership
// pattern of points matters, so distances factor through a small abstract
// state: counts of points private to each side and shared points. The closed
// forms below are conjectures derived from the move structure; an exhaustive
// BFS over abstract states validates them once per process, and the closed
// form silently falls back to BFS if that validation ever failed.

#include <algorithm>
#include <cstddef>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

#include "bridgestein/config.hpp"

namespace bridgestein {

namespace detail {

inline std::size_t count_not_in(const std::vector<double>& a,
                                const std::vector<double>& b) {
  std::size_t count = 0;
  for (double t : a)
    if (!sorted_member(b, t)) ++count;
  return count;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact BFS oracles over abstract states.
//
// Hypercube abstract state: (only_a, only_b, shared) relative to the target.
// A move adds two points (each either wanted-by-target or junk) or removes
// two present points (each either unwanted or shared). Fresh junk points are
// always available, so these counts capture the reachable quotient exactly.

inline int hypercube_distance_bfs_abstract(int only_a, int only_b,
                                           int shared) {
  if (only_a < 0 || only_b < 0 || shared < 0)
    throw std::invalid_argument("negative abstract counts");
  // Any geodesic is no longer than the via-empty route, and a move changes
  // each count by at most 2, which bounds the counts reachable on one.
  const int route_ub = (only_a + shared) / 2 + (only_b + shared) / 2 + 2;
  const int cap_a = only_a + 2 * route_ub;
  const int cap_b = only_b + 2 * route_ub;
  const int cap_s = shared + 2 * route_ub;

  struct State {
    int a, b, s;
    auto operator<=>(const State&) const = default;
  };
  std::map<State, int> dist;
  std::queue<State> frontier;
  const State start{only_a, only_b, shared};
  dist[start] = 0;
  frontier.push(start);
  while (!frontier.empty()) {
    const State cur = frontier.front();
    frontier.pop();
    const int d = dist[cur];
    if (cur.a == 0 && cur.b == 0) return d;
    auto push = [&](int a, int b, int s) {
      if (a < 0 || b < 0 || s < 0 || a > cap_a || b > cap_b || s > cap_s)
        return;
      const State next{a, b, s};
      if (dist.emplace(next, d + 1).second) frontier.push(next);
    };
    // additions: each new point is wanted (becomes shared) or junk
    if (cur.b >= 2) push(cur.a, cur.b - 2, cur.s + 2);
    if (cur.b >= 1) push(cur.a + 1, cur.b - 1, cur.s + 1);
    push(cur.a + 2, cur.b, cur.s);
    // removals: each removed point is unwanted or shared
    if (cur.a >= 2) push(cur.a - 2, cur.b, cur.s);
    if (cur.a >= 1 && cur.s >= 1) push(cur.a - 1, cur.b + 1, cur.s - 1);
    if (cur.s >= 2) push(cur.a, cur.b + 2, cur.s - 2);
  }
  throw std::logic_error("hypercube BFS: target unreachable");
}

// Lattice abstract state: per-side (only_a, only_b, shared); a move touches
// one point on each side simultaneously.
inline int lattice_distance_bfs_abstract(int up_a, int up_b, int up_s,
                                         int down_a, int down_b, int down_s) {
  if (up_a < 0 || up_b < 0 || up_s < 0 || down_a < 0 || down_b < 0 ||
      down_s < 0)
    throw std::invalid_argument("negative abstract counts");
  const int route_ub = (up_a + up_s) + (up_b + up_s) + 2;
  const int cap = 2 * route_ub +
                  std::max({up_a, up_b, up_s, down_a, down_b, down_s});

  struct State {
    int ua, ub, us, da, db, ds;
    auto operator<=>(const State&) const = default;
  };
  std::map<State, int> dist;
  std::queue<State> frontier;
  const State start{up_a, up_b, up_s, down_a, down_b, down_s};
  dist[start] = 0;
  frontier.push(start);
  while (!frontier.empty()) {
    const State cur = frontier.front();
    frontier.pop();
    const int d = dist[cur];
    if (cur.ua == 0 && cur.ub == 0 && cur.da == 0 && cur.db == 0) return d;
    auto push = [&](State next) {
      if (next.ua < 0 || next.ub < 0 || next.us < 0 || next.da < 0 ||
          next.db < 0 || next.ds < 0)
        return;
      if (next.ua > cap || next.ub > cap || next.us > cap || next.da > cap ||
          next.db > cap || next.ds > cap)
        return;
      if (dist.emplace(next, d + 1).second) frontier.push(next);
    };
    // additions: on each side the new point is wanted or junk (2x2 combos)
    for (int up_wanted = 0; up_wanted <= 1; ++up_wanted)
      for (int down_wanted = 0; down_wanted <= 1; ++down_wanted) {
        State next = cur;
        if (up_wanted) {
          if (cur.ub < 1) continue;
          --next.ub;
          ++next.us;
        } else {
          ++next.ua;
        }
        if (down_wanted) {
          if (cur.db < 1) continue;
          --next.db;
          ++next.ds;
        } else {
          ++next.da;
        }
        push(next);
      }
    // removals: on each side the removed point is unwanted or shared
    for (int up_unwanted = 0; up_unwanted <= 1; ++up_unwanted)
      for (int down_unwanted = 0; down_unwanted <= 1; ++down_unwanted) {
        State next = cur;
        if (up_unwanted) {
          if (cur.ua < 1) continue;
          --next.ua;
        } else {
          if (cur.us < 1) continue;
          --next.us;
          ++next.ub;
        }
        if (down_unwanted) {
          if (cur.da < 1) continue;
          --next.da;
        } else {
          if (cur.ds < 1) continue;
          --next.ds;
          ++next.db;
        }
        push(next);
      }
  }
  throw std::logic_error("lattice BFS: target unreachable");
}

inline constexpr std::size_t kBfsOracleMaxPointsPerSide = 8;

inline int graph_distance_bfs(const HypercubeConfig& a,
                              const HypercubeConfig& b) {
  if (a.size() > kBfsOracleMaxPointsPerSide ||
      b.size() > kBfsOracleMaxPointsPerSide)
    throw std::invalid_argument("graph_distance_bfs: beyond oracle scale");
  const auto only_a = static_cast<int>(detail::count_not_in(a.times, b.times));
  const auto only_b = static_cast<int>(detail::count_not_in(b.times, a.times));
  const auto shared = static_cast<int>(a.size()) - only_a;
  return hypercube_distance_bfs_abstract(only_a, only_b, shared);
}

inline int graph_distance_bfs(const LatticeConfig& a, const LatticeConfig& b) {
  if (a.up.size() > kBfsOracleMaxPointsPerSide ||
      b.up.size() > kBfsOracleMaxPointsPerSide)
    throw std::invalid_argument("graph_distance_bfs: beyond oracle scale");
  const auto ua = static_cast<int>(detail::count_not_in(a.up, b.up));
  const auto ub = static_cast<int>(detail::count_not_in(b.up, a.up));
  const auto us = static_cast<int>(a.up.size()) - ua;
  const auto da = static_cast<int>(detail::count_not_in(a.down, b.down));
  const auto db = static_cast<int>(detail::count_not_in(b.down, a.down));
  const auto ds = static_cast<int>(a.down.size()) - da;
  return lattice_distance_bfs_abstract(ua, ub, us, da, db, ds);
}

// ---------------------------------------------------------------------------
// Closed-form candidates.

inline int hypercube_distance_closed_form(int only_a, int only_b) {
  if (only_a == 0 && only_b == 0) return 0;
  // only_a and only_b have equal parity because both cardinalities are even
  const int base = (only_a + only_b) / 2;
  return only_a % 2 == 0 ? base : base + 1;
}

inline int lattice_distance_closed_form(int up_a, int up_b, int down_a,
                                        int down_b) {
  return std::max(up_a, down_a) + std::max(up_b, down_b);
}

// One-shot exhaustive validation of the closed forms against BFS on every
// abstract class with at most 4 points per side.
inline bool closed_form_distances_verified() {
  static std::once_flag flag;
  static bool verified = false;
  std::call_once(flag, [] {
    bool ok = true;
    for (int shared = 0; shared <= 4 && ok; ++shared)
      for (int only_a = 0; only_a + shared <= 4 && ok; ++only_a)
        for (int only_b = 0; only_b + shared <= 4 && ok; ++only_b) {
          if ((only_a + shared) % 2 != 0 || (only_b + shared) % 2 != 0)
            continue;
          ok = hypercube_distance_closed_form(only_a, only_b) ==
               hypercube_distance_bfs_abstract(only_a, only_b, shared);
        }
    for (int m_a = 0; m_a <= 4 && ok; ++m_a)
      for (int m_b = 0; m_b <= 4 && ok; ++m_b)
        for (int us = 0; us <= std::min(m_a, m_b) && ok; ++us)
          for (int ds = 0; ds <= std::min(m_a, m_b) && ok; ++ds) {
            const int ua = m_a - us, ub = m_b - us;
            const int da = m_a - ds, db = m_b - ds;
            ok = lattice_distance_closed_form(ua, ub, da, db) ==
                 lattice_distance_bfs_abstract(ua, ub, us, da, db, ds);
          }
    verified = ok;
  });
  return verified;
}

inline int graph_distance(const HypercubeConfig& a, const HypercubeConfig& b) {
  if (!closed_form_distances_verified()) return graph_distance_bfs(a, b);
  const auto only_a = static_cast<int>(detail::count_not_in(a.times, b.times));
  const auto only_b = static_cast<int>(detail::count_not_in(b.times, a.times));
  return hypercube_distance_closed_form(only_a, only_b);
}

inline int graph_distance(const LatticeConfig& a, const LatticeConfig& b) {
  if (!closed_form_distances_verified()) return graph_distance_bfs(a, b);
  const auto ua = static_cast<int>(detail::count_not_in(a.up, b.up));
  const auto ub = static_cast<int>(detail::count_not_in(b.up, a.up));
  const auto da = static_cast<int>(detail::count_not_in(a.down, b.down));
  const auto db = static_cast<int>(detail::count_not_in(b.down, a.down));
  return lattice_distance_closed_form(ua, ub, da, db);
}

}  // namespace bridgestein
