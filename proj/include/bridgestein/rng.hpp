#pragma once

// Deterministic random number generation.
//
// The generator is fixed for reproducibility: xoshiro256++ streams seeded
// through splitmix64. Replica r of an ensemble draws from an independent
// stream derived from (seed, r), so runs are bit-identical for a given
// (seed, replica count) regardless of thread scheduling.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace bridgestein {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed ^ (0xD2B74407B1CE6E93ULL * (stream + 1));
    for (auto& word : state_) word = splitmix64_next(sm);
    bool all_zero = true;
    for (auto word : state_) all_zero = all_zero && word == 0;
    if (all_zero) state_[0] = 0x9E3779B97F4A7C15ULL;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1); never returns an endpoint.
  double open01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential waiting time with the given rate.
  double exponential(double rate) { return -std::log(open01()) / rate; }

  /// Standard normal via Box-Muller (second draw cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double radius = std::sqrt(-2.0 * std::log(open01()));
    const double angle = 2.0 * std::numbers::pi * uniform01();
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

  /// Unbiased integer in [0, n), n >= 1 (Lemire rejection).
  std::uint64_t bounded(std::uint64_t n) {
    while (true) {
      const std::uint64_t x = next();
      const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
      const auto low = static_cast<std::uint64_t>(m);
      if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        if (low < threshold) continue;
      }
      return static_cast<std::uint64_t>(m >> 64);
    }
  }

  /// Ordered pair r < s, both uniform in (0,1).
  std::pair<double, double> ordered_pair01() {
    double r = open01();
    double s = open01();
    while (s == r) s = open01();
    if (s < r) std::swap(r, s);
    return {r, s};
  }

  /// Unordered uniform pair of distinct indices from [0, n), n >= 2.
  std::pair<std::size_t, std::size_t> index_pair(std::size_t n) {
    const auto i = static_cast<std::size_t>(bounded(n));
    auto j = static_cast<std::size_t>(bounded(n - 1));
    if (j >= i) ++j;
    return {i, j};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace bridgestein
