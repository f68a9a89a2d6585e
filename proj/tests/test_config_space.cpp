#include <catch2/catch_amalgamated.hpp>

#include "bridgestein/config.hpp"
#include "bridgestein/rng.hpp"

using namespace bridgestein;

TEST_CASE("pair move adds to the empty configuration") {
  const HypercubeConfig empty;
  const auto moved = apply_move(empty, 0.2, 0.7);
  REQUIRE(moved.times == std::vector<double>{0.2, 0.7});
}

TEST_CASE("pair move is an involution") {
  const auto config = HypercubeConfig::from_times({0.2, 0.7});
  REQUIRE(apply_move(config, 0.2, 0.7).empty());

  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> times;
    const auto pairs = rng.bounded(4);
    for (std::size_t k = 0; k < 2 * pairs; ++k) times.push_back(rng.open01());
    const auto base = HypercubeConfig::from_times(times);
    const auto [r, s] = rng.ordered_pair01();
    REQUIRE(apply_move(apply_move(base, r, s), r, s) == base);
  }
}

TEST_CASE("mixed membership leaves the configuration unchanged") {
  const auto config = HypercubeConfig::from_times({0.2, 0.5});
  REQUIRE(apply_move(config, 0.2, 0.7) == config);
}

TEST_CASE("move arguments are validated") {
  const HypercubeConfig empty;
  REQUIRE_THROWS_AS(apply_move(empty, 0.4, 0.4), std::invalid_argument);
  REQUIRE_THROWS_AS(apply_move(empty, 0.0, 0.5), std::invalid_argument);
  REQUIRE_THROWS_AS(apply_move(empty, 0.5, 1.0), std::invalid_argument);
  const LatticeConfig lattice_empty;
  REQUIRE_THROWS_AS(apply_move(lattice_empty, -0.1, 0.5),
                    std::invalid_argument);
}

TEST_CASE("lattice move handles add, remove and identity branches") {
  const LatticeConfig empty;
  const auto added = apply_move(empty, 0.3, 0.6);
  REQUIRE(added.up == std::vector<double>{0.3});
  REQUIRE(added.down == std::vector<double>{0.6});
  REQUIRE(apply_move(added, 0.3, 0.6).empty());
  REQUIRE(apply_move(added, 0.3, 0.7) == added);  // r present, s absent
  // an involution on lattice configurations as well
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    LatticeConfig base;
    const auto pairs = rng.bounded(3);
    for (std::size_t k = 0; k < pairs; ++k) {
      base = apply_move(base, rng.open01(), rng.open01());
    }
    const double r = rng.open01();
    const double s = rng.open01();
    if (r == s) continue;
    REQUIRE(apply_move(apply_move(base, r, s), r, s) == base);
  }
}

TEST_CASE("configuration invariants are enforced at construction") {
  REQUIRE_THROWS_AS(HypercubeConfig::from_times({0.2}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(HypercubeConfig::from_times({0.2, 0.2}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(LatticeConfig::from_times({0.1}, {}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(LatticeConfig::from_times({0.4}, {0.4}),
                    std::invalid_argument);
}

TEST_CASE("path reconstruction of the empty configuration is the zero path") {
  const auto path = reconstruct_path(LatticeConfig{});
  REQUIRE(path.size() == 0);
}

TEST_CASE("single excursion path") {
  const auto config = LatticeConfig::from_times({0.3}, {0.6});
  const auto path = reconstruct_path(config);
  REQUIRE(path.jump_times == std::vector<double>{0.3, 0.6});
  REQUIRE(path.jump_signs == std::vector<int>{1, -1});
  REQUIRE(path.value_after(0) == 1);
  REQUIRE(path.value_after(1) == 0);
}

TEST_CASE("path reconstruction round-trips and ends at zero") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    LatticeConfig config;
    const auto pairs = rng.bounded(6);
    for (std::size_t k = 0; k < pairs; ++k)
      config = apply_move(config, rng.open01(), rng.open01());
    const auto path = reconstruct_path(config);
    int level = 0;
    for (int sign : path.jump_signs) level += sign;
    REQUIRE(level == 0);
    REQUIRE(jump_times_of(path) == config);
  }
}

TEST_CASE("json round trip for both configuration kinds") {
  const auto hyper = HypercubeConfig::from_times({0.25, 0.5});
  REQUIRE(hypercube_from_json(to_json(hyper)) == hyper);
  const auto lattice = LatticeConfig::from_times({0.25}, {0.75});
  REQUIRE(lattice_from_json(to_json(lattice)) == lattice);
  REQUIRE(to_json(lattice)["up"].size() == 1);
}
