#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bridgestein/filtering.hpp"
#include "bridgestein/rng.hpp"
#include "test_support.hpp"

using namespace bridgestein;

namespace {
const LinearModel kUnitModel{1.0, 1.0};
}

TEST_CASE("conditional covariance pins the start and matches tanh at the end") {
  for (double t : {0.1, 0.5, 1.0})
    REQUIRE(std::abs(conditional_cov(kUnitModel, 0.0, t)) < 1e-15);
  REQUIRE(conditional_cov(kUnitModel, 1.0, 1.0) ==
          Catch::Approx(std::tanh(1.0)).epsilon(1e-14));
  REQUIRE(conditional_cov(kUnitModel, 0.3, 0.8) ==
          conditional_cov(kUnitModel, 0.8, 0.3));
  REQUIRE_THROWS_AS(conditional_cov(kUnitModel, -0.1, 0.5),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(conditional_cov(kUnitModel, 0.1, 1.5),
                    std::invalid_argument);
}

TEST_CASE("small-coupling covariance approaches the Brownian one") {
  const LinearModel weak{1e-6, 1.0};
  for (double s : {0.2, 0.5, 0.9})
    for (double t : {0.1, 0.6, 1.0})
      REQUIRE(std::abs(conditional_cov(weak, s, t) - std::min(s, t)) < 1e-5);
  // the series branch joins the direct formula continuously
  const LinearModel above{1.0001e-4, 1.0};
  const LinearModel below{0.9999e-4, 1.0};
  REQUIRE(conditional_cov(above, 0.4, 0.7) ==
          Catch::Approx(conditional_cov(below, 0.4, 0.7)).epsilon(1e-9));
}

TEST_CASE("grid covariance is positive semidefinite") {
  for (double alpha : {0.0, 0.5, 1.0, 3.0}) {
    const LinearModel model{alpha, 1.0};
    REQUIRE(covariance_min_pivot(model, 96) >= -1e-10);
  }
}

TEST_CASE("conditional mean: zero observation and linear observation") {
  const auto zero = ObservationPath::zero(1.0);
  REQUIRE(conditional_mean_phi_terminal(kUnitModel, zero) == 0.0);

  // z_t = t: the stochastic integral collapses to int sinh = cosh(1) - 1
  auto linear_obs = [](std::size_t n) {
    ObservationPath path;
    for (std::size_t i = 0; i <= n; ++i) {
      path.t.push_back(static_cast<double>(i) / n);
      path.z.push_back(static_cast<double>(i) / n);
    }
    return path;
  };
  const double exact = (std::cosh(1.0) - 1.0) / std::cosh(1.0);
  const double coarse =
      conditional_mean_phi_terminal(kUnitModel, linear_obs(128));
  const double fine =
      conditional_mean_phi_terminal(kUnitModel, linear_obs(256));
  REQUIRE(std::abs(fine - exact) < std::abs(coarse - exact));
  // left-point sums converge at first order: halving the step roughly
  // halves the error
  REQUIRE(std::abs(coarse - exact) / std::abs(fine - exact) ==
          Catch::Approx(2.0).margin(0.2));
  REQUIRE(conditional_mean_phi_terminal(kUnitModel, linear_obs(4096)) ==
          Catch::Approx(exact).margin(2e-4));
  ObservationPath bad;
  bad.t = {0.0};
  bad.z = {0.0};
  REQUIRE_THROWS_AS(conditional_mean_phi_terminal(kUnitModel, bad),
                    std::invalid_argument);
}

TEST_CASE("covariance quadrature matches the closed form") {
  const double closed = (std::cosh(1.0) - 1.0) / std::cosh(1.0);
  const double quad = integrate_adaptive(
      [&](double s) { return conditional_cov(kUnitModel, s, 1.0); }, 0.0, 1.0);
  REQUIRE(quad == Catch::Approx(closed).epsilon(1e-10));
}

TEST_CASE("drift constant") {
  REQUIRE(drift_perturbation_constant({0.0, 0.0, 0.5, 0.0}) == 0.0);
  REQUIRE(drift_perturbation_constant({0.0, 1.0, 0.5, 1.0}) ==
          Catch::Approx(2.5).epsilon(1e-15));
  double prev = -1.0;
  for (double k : {0.0, 0.5, 1.0, 2.0}) {
    const double w = drift_perturbation_constant({0.5, k, 0.6, 1.0});
    REQUIRE(w > prev);
    prev = w;
  }
  REQUIRE_THROWS_AS(drift_perturbation_constant({0.0, 1.0, 0.3, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("largest positive root: canonical cases") {
  {
    RootPolynomial p{0.5, 0.0, 0.0, 0.0, 1.0};  // x^2 - 1
    const auto r = largest_positive_root(p);
    REQUIRE(r.root == Catch::Approx(1.0).epsilon(1e-11));
    REQUIRE_FALSE(r.anomaly);
  }
  {
    RootPolynomial p{0.5, 0.0, 0.0, 1.0, 0.0};  // x^2 - x
    const auto r = largest_positive_root(p);
    REQUIRE(r.root == Catch::Approx(1.0).epsilon(1e-11));
    REQUIRE_FALSE(r.anomaly);
  }
  {
    RootPolynomial p{0.6, 0.5, 0.0, 0.7, 0.76};
    const auto r = largest_positive_root(p);
    REQUIRE(r.root == Catch::Approx(1.758807541864).epsilon(1e-9));
    REQUIRE(r.residual <= 1e-9 * p.scale());
  }
}

TEST_CASE("largest positive root agrees with the scan oracle") {
  Rng rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    // the drift-bound regime: decay exponents away from zero keep the
    // roots moderate, where the residual tolerance is meaningful in doubles
    RootPolynomial p;
    p.gamma = 0.25 + 0.7 * rng.uniform01();
    p.coeff_pow_2mg = 2.0 * rng.uniform01();
    p.coeff_pow_2m2g = 2.0 * rng.uniform01();
    p.coeff_linear = 2.0 * rng.uniform01();
    p.coeff_const = 0.01 + 2.0 * rng.uniform01();
    const auto r = largest_positive_root(p);
    REQUIRE_FALSE(r.anomaly);
    REQUIRE(r.residual <= 1e-9 * p.scale());
    const double oracle = test_support::scan_oracle_root(p);
    REQUIRE(std::abs(r.root - oracle) <= 1e-6 * std::max(1.0, oracle));
    // polynomial stays positive to the right of the root
    for (int k = 1; k <= 64; ++k)
      REQUIRE(p(r.root * (1.0 + 1e-6 * k) + 1e-12) >= 0.0);
  }
}

TEST_CASE("sup moment dominates the covariance diagonal") {
  const auto sup = gaussian_sup_moment(kUnitModel, 96, 4000, 5);
  REQUIRE(sup.estimate >=
          std::tanh(1.0) - 3.0 * sup.standard_error);
  REQUIRE_THROWS_AS(gaussian_sup_moment(kUnitModel, 8, 4000, 5),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(gaussian_sup_moment(kUnitModel, 96, 10, 5),
                    std::invalid_argument);
}

TEST_CASE("sup moment is stable under grid doubling") {
  const auto refine = gaussian_sup_moment_refinement(kUnitModel, 256, 4000, 13);
  REQUIRE(refine.relative_change() >= 0.0);
  REQUIRE(refine.relative_change() < 0.02);
  // the paired change is sharply resolved
  REQUIRE(refine.change_se < 0.01 * refine.coarse);
}

TEST_CASE("drift-free bounds vanish exactly") {
  FilteringMcParams mc{96, 2000, 7};
  const auto obs = ObservationPath::zero(1.0);
  const DriftSpec none{0.0, 0.0, 0.6, 0.0};
  REQUIRE(drift_bound_large_gamma(kUnitModel, obs, none, mc).value == 0.0);
  const DriftSpec none_small{0.0, 0.0, 0.3, 0.0};
  REQUIRE(drift_bound_small_gamma(kUnitModel, obs, none_small, mc).value ==
          0.0);
}

TEST_CASE("zero observation kills the mean terms") {
  FilteringMcParams mc{96, 2000, 7};
  const auto obs = ObservationPath::zero(1.0);
  const DriftSpec drift{0.0, 1.0, 0.49, 1.0};
  const auto bound = drift_bound_small_gamma(kUnitModel, obs, drift, mc);
  REQUIRE(bound.details.at("psi_phi").get<double>() == 0.0);
  REQUIRE(bound.details.at("phi_terminal").get<double>() == 0.0);
}

TEST_CASE("drift bound pipelines: frozen regression fixtures") {
  FilteringMcParams mc;  // grid 256, 20000 replicas, seed 1
  const auto obs = ObservationPath::zero(1.0);
  {
    const DriftSpec drift{0.0, 1.0, 0.5, 1.0};
    const auto bound = drift_bound_large_gamma(kUnitModel, obs, drift, mc);
    REQUIRE(bound.value == Catch::Approx(9.3918531242050936).epsilon(1e-12));
    REQUIRE(bound.details.at("w_const").get<double>() == 2.5);
    REQUIRE(bound.details.at("zeta").get<double>() ==
            Catch::Approx(2.0 * std::tanh(1.0)).epsilon(1e-12));
    // deterministic per seed
    const auto again = drift_bound_large_gamma(kUnitModel, obs, drift, mc);
    REQUIRE(again.value == bound.value);
  }
  {
    const DriftSpec drift{0.0, 1.0, 0.49, 1.0};
    REQUIRE(drift_bound_small_gamma(kUnitModel, obs, drift, mc).value ==
            Catch::Approx(21.250874153103751).epsilon(1e-12));
  }
  {
    const DriftSpec drift{0.0, 1.0, 0.51, 1.0};
    REQUIRE(drift_bound_large_gamma(kUnitModel, obs, drift, mc).value ==
            Catch::Approx(9.5178803409736563).epsilon(1e-12));
  }
}

TEST_CASE("large-gamma bound is nondecreasing in the derivative constant") {
  FilteringMcParams mc{96, 2000, 7};
  const auto obs = ObservationPath::zero(1.0);
  double prev = -1.0;
  for (double k : {0.0, 0.5, 1.0, 2.0}) {
    const DriftSpec drift{0.0, k, 0.5, 1.0};
    const double value =
        drift_bound_large_gamma(kUnitModel, obs, drift, mc).value;
    REQUIRE(value >= prev);
    prev = value;
  }
}

TEST_CASE("gamma regimes route to the matching drift bound") {
  FilteringMcParams mc{96, 2000, 7};
  const auto obs = ObservationPath::zero(1.0);
  REQUIRE_THROWS_AS(drift_bound_large_gamma(kUnitModel, obs,
                                              {0.0, 1.0, 0.3, 1.0}, mc),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(drift_bound_small_gamma(kUnitModel, obs,
                                              {0.0, 1.0, 0.7, 1.0}, mc),
                    std::invalid_argument);
}
