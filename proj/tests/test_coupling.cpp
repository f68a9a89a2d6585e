#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bridgestein/chains.hpp"
#include "bridgestein/coupling.hpp"
#include "bridgestein/distance.hpp"
#include "bridgestein/parallel.hpp"
#include "bridgestein/stats.hpp"
#include "bridgestein/oracles.hpp"
#include "test_support.hpp"

using namespace bridgestein;

namespace {

template <class Config>
void check_coupled_invariants(const CoupledTrajectory<Config>& coupled) {
  // replayed distance must match the clock formula at every event time
  Config u = coupled.u_initial;
  Config v = coupled.v_initial;
  REQUIRE(graph_distance(u, v) == 1);
  for (std::size_t k = 0; k < coupled.events.size(); ++k) {
    const auto& e = coupled.events[k];
    if (e.touches_u) u = apply_move(u, e.u_r, e.u_s);
    if (e.touches_v) v = apply_move(v, e.v_r, e.v_s);
    REQUIRE(u == coupled.u_states[k]);
    REQUIRE(v == coupled.v_states[k]);
    const int d = graph_distance(u, v);
    REQUIRE(d == coupled.distance_at(e.time));
  }
  // coalescence is absorbing
  if (coupled.coalesced) {
    bool met = false;
    for (std::size_t k = 0; k < coupled.events.size(); ++k) {
      if (coupled.events[k].time >= coupled.t_big) met = true;
      if (met) REQUIRE(coupled.u_states[k] == coupled.v_states[k]);
    }
  }
  REQUIRE(coupled.t_m <= coupled.t_big);
}

}  // namespace

TEST_CASE("hypercube coupling: distance identity and coalescence") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto coupled = simulate_coupled_hypercube(
        HypercubeConfig{}, 0.3, 0.7, 1.0, 8.0, 1000 + seed);
    check_coupled_invariants(coupled);
    // the surviving-pair case drops the distance from one to zero directly
    if (coupled.coalesced && coupled.t_m == coupled.t_big) {
      REQUIRE(coupled.distance_at(std::nextafter(coupled.t_m, 1e9)) == 0);
    }
  }
}

TEST_CASE("hypercube coupling from a non-empty start") {
  const auto start = HypercubeConfig::from_times({0.1, 0.9});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto coupled =
        simulate_coupled_hypercube(start, 0.3, 0.7, 1.0, 8.0, 77 + seed);
    check_coupled_invariants(coupled);
  }
  // removal neighbors work as well: V contains the pair
  const auto v0 = HypercubeConfig::from_times({0.3, 0.7});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto coupled =
        simulate_coupled_hypercube(v0, 0.3, 0.7, 1.0, 8.0, 901 + seed);
    check_coupled_invariants(coupled);
  }
}

TEST_CASE("lattice coupling: distance identity and coalescence") {
  const auto start = LatticeConfig::from_times({0.15}, {0.85});
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto coupled = simulate_coupled_lattice(start, 0.4, 0.6, 1.0, 1.0,
                                                  8.0, 5000 + seed);
    check_coupled_invariants(coupled);
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto coupled = simulate_coupled_lattice(LatticeConfig{}, 0.4, 0.6,
                                                  1.3, 0.7, 8.0, 42 + seed);
    check_coupled_invariants(coupled);
  }
}

TEST_CASE("invalid coupling moves are rejected") {
  const auto v0 = HypercubeConfig::from_times({0.3, 0.9});
  REQUIRE_THROWS_AS(simulate_coupled_hypercube(v0, 0.3, 0.7, 1.0, 1.0, 1),
                    std::invalid_argument);
}

TEST_CASE("extra-pair survival decays at least exponentially") {
  const std::size_t replicas = 20000;
  std::vector<double> t_m(replicas);
  parallel_replicas(replicas, [&](std::size_t rep) {
    const auto coupled = simulate_coupled_hypercube(HypercubeConfig{}, 0.3,
                                                    0.7, 1.0, 4.5, 31, rep);
    t_m[rep] = coupled.t_m;
  });
  for (double t : {1.0, 2.0, 4.0}) {
    std::size_t alive = 0;
    for (double v : t_m)
      if (v > t) ++alive;
    const double p = static_cast<double>(alive) / replicas;
    const double se = std::sqrt(p * (1.0 - p) / replicas);
    REQUIRE(p <= std::exp(-t) + 3.0 * se);
  }
}

TEST_CASE("contraction curve starts at one and obeys the envelope") {
  ContractionParams params;
  params.hypercube = true;
  params.alpha = 1.0;
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};
  const auto curve = estimate_contraction(params, grid, 2000, 11);
  REQUIRE(curve.mean_distance.front() == 1.0);
  REQUIRE(curve.envelope.front() == Catch::Approx(5.0).epsilon(1e-15));
  for (std::size_t k = 1; k < grid.size(); ++k)
    REQUIRE(curve.mean_distance[k] <=
            curve.envelope[k] + 3.0 * curve.standard_error[k]);
  REQUIRE_THROWS_AS(estimate_contraction(params, {}, 2000, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(estimate_contraction(params, grid, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("coupled marginals reproduce single-chain statistics") {
  // event counts at t = 2 for each marginal vs the single chain (light
  // version of the acceptance run)
  const std::size_t replicas = 4000;
  const double horizon = 2.0;
  std::vector<double> u_counts(replicas), v_counts(replicas),
      u_single(replicas), v_single(replicas);
  parallel_replicas(replicas, [&](std::size_t rep) {
    const auto coupled = simulate_coupled_hypercube(
        HypercubeConfig{}, 0.3, 0.7, 1.0, horizon, 600, rep);
    u_counts[rep] = static_cast<double>(coupled.u_events_up_to(horizon));
    v_counts[rep] = static_cast<double>(coupled.v_events_up_to(horizon));
    const auto u_chain = simulate_hypercube_chain(
        apply_move(HypercubeConfig{}, 0.3, 0.7), 1.0, horizon, 601, rep);
    u_single[rep] = static_cast<double>(u_chain.events.size());
    const auto v_chain =
        simulate_hypercube_chain(HypercubeConfig{}, 1.0, horizon, 602, rep);
    v_single[rep] = static_cast<double>(v_chain.events.size());
  });
  REQUIRE(ks_test_two_sample(u_counts, u_single).p_value > 0.001);
  REQUIRE(ks_test_two_sample(v_counts, v_single).p_value > 0.001);

  // first-holding law of the smaller marginal: exponential with the rate of
  // its own configuration
  std::vector<double> first_v(replicas, 0.0);
  parallel_replicas(replicas, [&](std::size_t rep) {
    const auto coupled = simulate_coupled_hypercube(
        HypercubeConfig{}, 0.3, 0.7, 1.0, 50.0, 603, rep);
    for (const auto& e : coupled.events)
      if (e.touches_v) {
        first_v[rep] = e.time;
        break;
      }
  });
  const double rate_v = hypercube_holding_rate(HypercubeConfig{}, 1.0);
  const auto ks = ks_test_cdf(
      first_v, [rate_v](double t) { return 1.0 - std::exp(-rate_v * t); });
  REQUIRE(ks.p_value > 0.001);
}

TEST_CASE("results are independent of the worker count") {
  ContractionParams params;
  params.hypercube = false;
  const std::vector<double> grid{0.5, 1.5};
  setenv("BRIDGE_STEIN_THREADS", "1", 1);
  const auto serial = estimate_contraction(params, grid, 500, 77);
  setenv("BRIDGE_STEIN_THREADS", "4", 1);
  const auto threaded = estimate_contraction(params, grid, 500, 77);
  unsetenv("BRIDGE_STEIN_THREADS");
  REQUIRE(serial.mean_distance == threaded.mean_distance);
  REQUIRE(serial.standard_error == threaded.standard_error);
}

TEST_CASE("coupled marginal reaches the bridge law in equilibrium") {
  // the smaller marginal of the coupling, run long, must land on the same
  // stationary law as the plain chain
  const std::size_t replicas = 10000;
  std::vector<long long> counts(replicas);
  parallel_replicas(replicas, [&](std::size_t rep) {
    const auto coupled = simulate_coupled_hypercube(HypercubeConfig{}, 0.3,
                                                    0.7, 1.0, 14.0, 808, rep);
    const auto& final_v =
        coupled.v_states.empty() ? coupled.v_initial : coupled.v_states.back();
    counts[rep] = static_cast<long long>(final_v.pair_count());
  });
  const double tv = total_variation(test_support::histogram(counts),
                                    hypercube_pair_count_law(1.0).pmf);
  REQUIRE(tv < 0.04);
}
