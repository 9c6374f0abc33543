#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levymass/bessel.hpp"
#include "levymass/errors.hpp"
#include "oracles.hpp"

using levymass::bessel_k;

TEST_CASE("K1 small-argument limit z K1(z) -> 1") {
  CHECK(std::abs(1e-6 * bessel_k(1, 1e-6) - 1.0) <= 1e-8);
}

TEST_CASE("K1(1) against the integral representation") {
  const double reference = oracle::bessel_k_integral(1.0, 1.0);
  CHECK(reference == doctest::Approx(0.6019072302).epsilon(1e-9));
  CHECK(std::abs(bessel_k(1, 1.0) - 0.6019072302) <= 1e-9);
  CHECK(std::abs(bessel_k(1, 1.0) - reference) <= 1e-14);
}

TEST_CASE("K2 large-argument asymptotics") {
  const double z = 10.0;
  const double asym = std::sqrt(oracle::kPi / (2.0 * z)) * std::exp(-z) *
                      (1.0 + 15.0 / (8.0 * z));
  CHECK(std::abs(bessel_k(2, z) / asym - 1.0) <= 0.01);
}

TEST_CASE("orders 0..2 match the integral oracle across both regimes") {
  for (int order = 0; order <= 2; ++order) {
    for (double z : {1e-3, 0.05, 0.5, 1.0, 1.9, 2.0, 2.1, 3.7, 10.0, 40.0, 200.0}) {
      const double ref = oracle::bessel_k_integral(order, z);
      CAPTURE(order);
      CAPTURE(z);
      CHECK(std::abs(bessel_k(order, z) / ref - 1.0) <= 2e-13);
    }
  }
}

TEST_CASE("recurrence K2 = K0 + 2 K1 / z with K0 from the oracle") {
  for (double z : {0.1, 1.0, 10.0}) {
    const double rhs =
        oracle::bessel_k_integral(0.0, z) + 2.0 * bessel_k(1, z) / z;
    CHECK(std::abs(bessel_k(2, z) - rhs) <= 1e-10 * std::max(1.0, rhs));
  }
}

TEST_CASE("scaled values survive where K underflows") {
  const auto v = levymass::bessel_k_checked(1, 800.0);
  CHECK(v.underflow);
  CHECK(v.value == 0.0);
  const double scaled = levymass::bessel_k_scaled(1, 800.0);
  CHECK(scaled == doctest::Approx(std::sqrt(oracle::kPi / 1600.0) *
                                  (1.0 + 3.0 / 6400.0))
                      .epsilon(1e-6));
  CHECK_FALSE(levymass::bessel_k_checked(1, 700.0).underflow);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_k(1, 0.0), levymass::DomainError);
  CHECK_THROWS_AS(bessel_k(1, -1.0), levymass::DomainError);
  CHECK_THROWS_AS(bessel_k(3, 1.0), levymass::DomainError);
}
