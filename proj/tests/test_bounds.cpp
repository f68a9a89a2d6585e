#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bridgestein/bounds.hpp"
#include "test_support.hpp"

using namespace bridgestein;

TEST_CASE("hypercube bound closed form") {
  REQUIRE(bound_hypercube(1.0, 1.0).value == 0.0);
  REQUIRE(bound_hypercube(2.0, 1.0).value ==
          Catch::Approx(13.5).epsilon(1e-14));
  REQUIRE(bound_hypercube_multi({1.0, 2.0}, {1.0, 1.0}).value ==
          Catch::Approx(13.5).epsilon(1e-14));
  REQUIRE_THROWS_AS(bound_hypercube_multi({1.0}, {1.0, 2.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(bound_hypercube(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("lattice bound closed form") {
  REQUIRE(bound_lattice(1.5, 1.0, 1.0, 1.0).value ==
          Catch::Approx(4.5).epsilon(1e-14));
  REQUIRE(bound_lattice(2.0, 0.5, 1.0, 1.0).value == 0.0);
  REQUIRE(bound_lattice_multi({1.5, 1.0}, {1.0, 1.0}, {1.0, 2.0}, {1.0, 0.5})
              .value == Catch::Approx(4.5).epsilon(1e-12));
}

TEST_CASE("reversible bound: value, limit and monotonicity") {
  // direct evaluation 9 (2 (e - 2) - 1)
  REQUIRE(bound_reversible(1.0).value ==
          Catch::Approx(18.0 * std::exp(1.0) - 45.0).epsilon(1e-13));
  REQUIRE(bound_reversible(1.0).value ==
          Catch::Approx(3.92907291226281).epsilon(1e-12));
  REQUIRE(bound_reversible(0.0).value == 0.0);
  // small-kappa behavior is 3 kappa + O(kappa^2); the series branch and the
  // direct formula agree across the switch
  REQUIRE(bound_reversible(1e-6).value ==
          Catch::Approx(3e-6).epsilon(1e-5));
  {
    // the series branch agrees with a direct evaluation at the same kappa
    const double kappa = 0.99e-4;
    // the direct form loses ~8 digits to cancellation here, so the series
    // is the accurate side of this comparison
    const double direct =
        9.0 * (2.0 * (std::expm1(kappa) - kappa) / (kappa * kappa) - 1.0);
    REQUIRE(bound_reversible(kappa).value ==
            Catch::Approx(direct).epsilon(1e-6));
  }
  double prev = 0.0;
  for (double kappa : {0.1, 0.2, 0.5, 1.0, 2.0, 4.0}) {
    const double value = bound_reversible(kappa).value;
    REQUIRE(value > prev);
    prev = value;
  }
  REQUIRE_THROWS_AS(bound_reversible(-0.1), std::invalid_argument);
}

TEST_CASE("constant-speed bound reduces to the homogeneous one at mu == nu") {
  for (double lambda : {0.5, 1.0, 2.0}) {
    const double expected = 9.0 * std::abs(1.0 - lambda);
    REQUIRE(std::abs(bound_constant_speed(lambda, lambda).value - expected) <
            1e-12);
  }
  REQUIRE(bound_constant_speed(1.0, 1.0).value == 0.0);
  REQUIRE_THROWS_AS(bound_constant_speed(1.0, 2.0), std::invalid_argument);
}

TEST_CASE("constant-speed bound against the quadrature oracle") {
  const double mu = 1.5, nu = 1.0;
  const double oracle =
      9.0 * (mu * test_support::bessel_i0_integral_oracle(2.0 * mu / std::sqrt(nu)) /
                 test_support::bessel_i0_integral_oracle(2.0 * std::sqrt(nu)) -
             std::sqrt(mu * nu) + std::abs(1.0 - std::sqrt(mu * nu)));
  REQUIRE(bound_constant_speed(mu, nu).value ==
          Catch::Approx(oracle).epsilon(1e-10));
  REQUIRE(bound_constant_speed(mu, nu).value ==
          Catch::Approx(19.904687112017494).epsilon(1e-12));
}

TEST_CASE("scheme bound values and asymptote") {
  REQUIRE(bound_scheme(10).value == Catch::Approx(7.425).epsilon(1e-13));
  // leading order: N times the bound approaches 81
  REQUIRE(1e6 * bound_scheme(1000000).value ==
          Catch::Approx(81.0).margin(0.01));
  double prev = 1e100;
  for (int n = 10; n <= 640; n *= 2) {
    const double value = bound_scheme(n).value;
    REQUIRE(value < prev);
    prev = value;
  }
  REQUIRE_THROWS_AS(bound_scheme(2), std::invalid_argument);
}

TEST_CASE("non-homogeneous estimate is exactly zero for unit rates") {
  const auto report = estimate_bound_nonhomogeneous(unit_rates(), 200, 4);
  REQUIRE(report.value == 0.0);
  REQUIRE(report.details.at("sup_form_value").get<double>() == 0.0);
}

TEST_CASE("reversible family estimate is dominated by the closed form") {
  const double kappa = 0.5;
  const auto report = estimate_bound_nonhomogeneous(
      alternating_reversible_rates(kappa), 1500, 5);
  const double closed = bound_reversible(kappa).value;
  REQUIRE(report.value <= closed + 3.0 * report.se.value());
  REQUIRE(report.value > 0.0);
  // the coarser sup form exceeds the integral form
  REQUIRE(report.details.at("sup_form_value").get<double>() >= report.value);
}

TEST_CASE("constant-speed per-draw supremum respects the two-sided envelope") {
  const double mu = 2.0, nu = 1.0;
  const auto rates = alternating_constant_speed_rates(mu, nu);
  NonhomogeneousBridgeMh sampler(rates, 31);
  for (int k = 0; k < 40; ++k) {
    const auto& config = sampler.next();
    const auto functionals = detail::h_deviation_functionals(config, rates);
    const double m = static_cast<double>(config.pair_count());
    const double upper = mu * std::pow(mu / nu, m) - 1.0;
    REQUIRE(functionals.sup <= upper + 1e-9);
    // the envelope floor bounds H - 1 from below, so |H - 1| can reach at
    // most max(upper, 1 - nu (nu/mu)^m)
    const double lower_gap = 1.0 - nu * std::pow(nu / mu, m);
    REQUIRE(functionals.sup <= std::max(upper, lower_gap) + 1e-9);
  }
}

TEST_CASE("bound report serializes with nullable standard error") {
  const auto closed = bound_scheme(10);
  const auto j = closed.to_json();
  REQUIRE(j.at("se").is_null());
  REQUIRE(j.at("variant") == "scheme");
  const auto mc = estimate_bound_nonhomogeneous(unit_rates(), 200, 4);
  REQUIRE(mc.to_json().at("se").is_number());
}
