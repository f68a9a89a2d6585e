#pragma once

// Jump-time configuration spaces for bridge dynamics.
//
// HypercubeConfig: an even-cardinality set of jump times in (0,1), the state
// of a two-state bridge. LatticeConfig: equal-cardinality sets of up- and
// down-jump times, the state of an integer-valued bridge. Both are explored
// by the involutive perturbation that adds or removes a pair of times.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bridgestein {

inline bool valid_time(double t) { return t > 0.0 && t < 1.0; }

namespace detail {

inline bool sorted_member(const std::vector<double>& v, double t) {
  return std::binary_search(v.begin(), v.end(), t);
}

inline void sorted_insert(std::vector<double>& v, double t) {
  v.insert(std::upper_bound(v.begin(), v.end(), t), t);
}

inline void sorted_erase(std::vector<double>& v, double t) {
  auto it = std::lower_bound(v.begin(), v.end(), t);
  if (it == v.end() || *it != t)
    throw std::logic_error("sorted_erase: time not present");
  v.erase(it);
}

inline void check_sorted_distinct_in01(const std::vector<double>& v,
                                       const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!valid_time(v[i]))
      throw std::invalid_argument(std::string(what) + ": time outside (0,1)");
    if (i > 0 && v[i] <= v[i - 1])
      throw std::invalid_argument(std::string(what) +
                                  ": times not strictly increasing");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hypercube configurations

struct HypercubeConfig {
  std::vector<double> times;  // sorted, distinct, in (0,1), even cardinality

  static HypercubeConfig from_times(std::vector<double> ts) {
    std::sort(ts.begin(), ts.end());
    detail::check_sorted_distinct_in01(ts, "HypercubeConfig");
    if (ts.size() % 2 != 0)
      throw std::invalid_argument("HypercubeConfig: cardinality must be even");
    return HypercubeConfig{std::move(ts)};
  }

  std::size_t size() const { return times.size(); }
  std::size_t pair_count() const { return times.size() / 2; }
  bool contains(double t) const { return detail::sorted_member(times, t); }
  bool empty() const { return times.empty(); }
  bool operator==(const HypercubeConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Lattice configurations

struct LatticeConfig {
  std::vector<double> up;    // times of +1 jumps, sorted
  std::vector<double> down;  // times of -1 jumps, sorted

  static LatticeConfig from_times(std::vector<double> up_ts,
                                  std::vector<double> down_ts) {
    std::sort(up_ts.begin(), up_ts.end());
    std::sort(down_ts.begin(), down_ts.end());
    detail::check_sorted_distinct_in01(up_ts, "LatticeConfig.up");
    detail::check_sorted_distinct_in01(down_ts, "LatticeConfig.down");
    if (up_ts.size() != down_ts.size())
      throw std::invalid_argument("LatticeConfig: |up| != |down|");
    std::vector<double> both;
    std::set_intersection(up_ts.begin(), up_ts.end(), down_ts.begin(),
                          down_ts.end(), std::back_inserter(both));
    if (!both.empty())
      throw std::invalid_argument("LatticeConfig: time on both sides");
    return LatticeConfig{std::move(up_ts), std::move(down_ts)};
  }

  std::size_t pair_count() const { return up.size(); }
  bool empty() const { return up.empty() && down.empty(); }
  bool operator==(const LatticeConfig&) const = default;
};

// ---------------------------------------------------------------------------
// The pair perturbation. Adding a pair that is already present removes it,
// so the map is an involution; mixed membership leaves the state unchanged.

inline void check_move_args(double r, double s) {
  if (r == s) throw std::invalid_argument("apply_move: r == s");
  if (!valid_time(r) || !valid_time(s))
    throw std::invalid_argument("apply_move: time outside (0,1)");
}

inline HypercubeConfig apply_move(const HypercubeConfig& config, double r,
                                  double s) {
  check_move_args(r, s);
  HypercubeConfig out = config;
  const bool has_r = out.contains(r);
  const bool has_s = out.contains(s);
  if (!has_r && !has_s) {
    detail::sorted_insert(out.times, r);
    detail::sorted_insert(out.times, s);
  } else if (has_r && has_s) {
    detail::sorted_erase(out.times, r);
    detail::sorted_erase(out.times, s);
  }
  return out;
}

inline LatticeConfig apply_move(const LatticeConfig& config, double r,
                                double s) {
  check_move_args(r, s);
  LatticeConfig out = config;
  const bool has_r = detail::sorted_member(out.up, r);
  const bool has_s = detail::sorted_member(out.down, s);
  if (!has_r && !has_s) {
    // Guard against a time landing on both sides (probability-zero event);
    // such a move is treated as the identity.
    if (detail::sorted_member(out.down, r) || detail::sorted_member(out.up, s))
      return out;
    detail::sorted_insert(out.up, r);
    detail::sorted_insert(out.down, s);
  } else if (has_r && has_s) {
    detail::sorted_erase(out.up, r);
    detail::sorted_erase(out.down, s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Piecewise-constant integer path attached to a lattice configuration.

struct PathZ {
  std::vector<double> jump_times;  // sorted
  std::vector<int> jump_signs;     // +1 or -1, same length

  std::size_t size() const { return jump_times.size(); }

  /// Value right after the k-th jump (prefix sum of signs).
  int value_after(std::size_t k) const {
    int v = 0;
    for (std::size_t i = 0; i <= k && i < jump_signs.size(); ++i)
      v += jump_signs[i];
    return v;
  }
};

inline PathZ reconstruct_path(const LatticeConfig& config) {
  PathZ path;
  path.jump_times.reserve(config.up.size() + config.down.size());
  path.jump_signs.reserve(config.up.size() + config.down.size());
  std::size_t i = 0, j = 0;
  while (i < config.up.size() || j < config.down.size()) {
    const bool take_up =
        j == config.down.size() ||
        (i < config.up.size() && config.up[i] < config.down[j]);
    if (take_up) {
      path.jump_times.push_back(config.up[i++]);
      path.jump_signs.push_back(+1);
    } else {
      path.jump_times.push_back(config.down[j++]);
      path.jump_signs.push_back(-1);
    }
  }
  return path;
}

inline LatticeConfig jump_times_of(const PathZ& path) {
  std::vector<double> up, down;
  for (std::size_t k = 0; k < path.size(); ++k)
    (path.jump_signs[k] > 0 ? up : down).push_back(path.jump_times[k]);
  return LatticeConfig::from_times(std::move(up), std::move(down));
}

// ---------------------------------------------------------------------------
// JSON wire format: {"times": [...]} and {"up": [...], "down": [...]}

inline nlohmann::json to_json(const HypercubeConfig& config) {
  return nlohmann::json{{"times", config.times}};
}

inline nlohmann::json to_json(const LatticeConfig& config) {
  return nlohmann::json{{"up", config.up}, {"down", config.down}};
}

inline HypercubeConfig hypercube_from_json(const nlohmann::json& j) {
  return HypercubeConfig::from_times(j.at("times").get<std::vector<double>>());
}

inline LatticeConfig lattice_from_json(const nlohmann::json& j) {
  return LatticeConfig::from_times(j.at("up").get<std::vector<double>>(),
                                   j.at("down").get<std::vector<double>>());
}

}  // namespace bridgestein
