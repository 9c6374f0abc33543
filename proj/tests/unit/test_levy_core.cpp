#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "levymass/bessel.hpp"
#include "levymass/errors.hpp"
#include "levymass/levy_core.hpp"
#include "oracles.hpp"

using namespace levymass;

namespace {

std::vector<double> symmetric_grid() {
  std::vector<double> u;
  for (int i = 0; i < 64; ++i) u.push_back(-10.0 + 20.0 * i / 63.0);
  return u;
}

LevyExponent exponential_measure() {
  LevyDensity w{[](double x) { return std::exp(-std::abs(x)); }, 0.0, 1.0};
  return LevyExponent::measure_defined(0.0, w);
}

}  // namespace

TEST_CASE("eta_relativistic examples") {
  CHECK(eta_relativistic(0.0, 1.0) == 0.0);
  CHECK(eta_relativistic(0.0, 3.7) == 0.0);
  CHECK(eta_relativistic(1.0, 1.0) == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(eta_relativistic(1.0, 1.0) + 0.4142136) <= 1e-7);
  for (double u : {0.3, 2.0, 17.0}) {
    CHECK(eta_relativistic(-u, 1.3) == eta_relativistic(u, 1.3));
  }
}

TEST_CASE("eta_from_measure examples") {
  const auto rel = LevyExponent::relativistic(1.0);
  CHECK(eta_from_measure(0.0, rel).value == 0.0);
  CHECK(eta_from_measure(0.0, exponential_measure()).value == 0.0);

  const auto gauss = LevyExponent::gaussian(1.0);
  CHECK(eta_from_measure(2.0, gauss).value == doctest::Approx(-2.0).epsilon(1e-15));

  CHECK(std::abs(eta_from_measure(1.0, rel).value + 0.4142136) <= 1e-6);
}

TEST_CASE("measure-defined exponent against its closed form") {
  // int (cos ux - 1) e^{-|x|} dx = -2 u^2 / (1 + u^2).
  const auto e = exponential_measure();
  for (double u : {0.1, 1.0, 7.5}) {
    CHECK(e.eta(u) == doctest::Approx(-2.0 * u * u / (1.0 + u * u)).epsilon(1e-10));
  }
}

TEST_CASE("Levy-Khintchin identity on the 64-point grid") {
  for (double m : {0.5, 1.0, 2.0}) {
    const auto e = LevyExponent::relativistic(m);
    double worst = 0.0;
    for (double u : symmetric_grid()) {
      worst = std::max(worst, std::abs(eta_from_measure(u, e).value -
                                       eta_relativistic(u, m)));
    }
    CAPTURE(m);
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("eta is non-positive, even and zero at the origin for every kind") {
  const std::vector<LevyExponent> kinds{
      LevyExponent::relativistic(1.0), LevyExponent::gaussian(0.7, 2.0),
      exponential_measure(),
      LevyExponent::measure_defined(0.5, relativistic_density(2.0))};
  for (const auto& e : kinds) {
    CAPTURE(e.describe());
    CHECK(e.eta(0.0) == 0.0);
    for (double u : symmetric_grid()) {
      const double v = e.eta(u);
      CHECK(v <= 0.0);
      CHECK(v == doctest::Approx(e.eta(-u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("relativistic kind derives tau = 1/m; drift is rejected") {
  const auto e = LevyExponent::relativistic(4.0);
  CHECK(e.tau() == 0.25);
  CHECK(e.mass() == 4.0);
  CHECK(e.beta() == 0.0);
  CHECK(e.density() != nullptr);
  CHECK_THROWS_AS(LevyExponent::gaussian(1.0).mass(), DomainError);
  CHECK_THROWS_AS(LevyExponent::relativistic(0.0), DomainError);
  CHECK_THROWS_AS(LevyExponent::relativistic(-1.0), DomainError);
  CHECK_THROWS_AS(LevyExponent::from_triplet(0.1, 0.0, relativistic_density(1.0)),
                  DomainError);
  CHECK_NOTHROW(LevyExponent::from_triplet(0.0, 0.0, relativistic_density(1.0)));
}

TEST_CASE("1D density") {
  for (double x : {0.1, 1.0, 10.0}) {
    CHECK(levy_density_1d(-x, 1.0) == levy_density_1d(x, 1.0));
    CHECK(levy_density_1d(x, 1.0) > 0.0);
  }
  CHECK(std::abs(levy_density_1d(1e-5, 1.0) * 1e-10 - 1.0 / oracle::kPi) <= 1e-6);
  const double x = 10.0;
  const double asym = std::exp(-x) * std::sqrt(oracle::kPi / (2.0 * x)) / (oracle::kPi * x);
  const double ratio = levy_density_1d(x, 1.0) / asym;
  CHECK(ratio >= 0.95);
  CHECK(ratio <= 1.05);
  CHECK_THROWS_AS(levy_density_1d(0.0, 1.0), DomainError);
}

TEST_CASE("3D density") {
  const double r = 1e-4;
  CHECK(std::abs(levy_density_3d(r, 1.0) * std::pow(r, 4) - 1.0 / (oracle::kPi * oracle::kPi)) <= 1e-5);
  double previous = levy_density_3d(0.1, 1.0);
  for (int i = 1; i < 100; ++i) {
    const double ri = 0.1 + (20.0 - 0.1) * i / 99.0;
    const double v = levy_density_3d(ri, 1.0);
    CHECK(v < previous);
    previous = v;
  }
  CHECK(levy_density_3d(0.5, 2.0) == doctest::Approx(8.0 * levy_density_3d(1.0, 1.0)).epsilon(1e-14));
  // Against the integral oracle for K2.
  CHECK(levy_density_3d(1.5, 1.0) ==
        doctest::Approx(oracle::bessel_k_integral(2.0, 1.5) /
                        (2.0 * oracle::kPi * oracle::kPi * 2.25))
            .epsilon(1e-12));
}

TEST_CASE("measure validation") {
  const auto rel = validate_levy_measure(relativistic_density(1.0));
  CHECK(rel.ok);

  LevyDensity cubic{[](double x) { return 1.0 / std::pow(std::abs(x), 3); }, 3.0};
  const auto bad = validate_levy_measure(cubic);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.diagnostic.empty());

  LevyDensity expo{[](double x) { return std::exp(-std::abs(x)); }, 0.0, 1.0};
  const auto good = validate_levy_measure(expo);
  CHECK(good.ok);
  CHECK(std::abs(good.tail_mass - 2.0 / std::exp(1.0)) <= 1e-8);
  CHECK(good.small_jump_mass == doctest::Approx(2.0 * (2.0 - 5.0 / std::exp(1.0))).epsilon(1e-9));
}

TEST_CASE("dispersion energy") {
  CHECK(dispersion_energy(0.0, 2.0) == 0.0);
  CHECK(dispersion_energy(0.75, 1.0) == 0.25);
  CHECK(std::abs(dispersion_energy(2.3, 1.7) + 1.7 * eta_relativistic(2.3, 1.7)) <= 1e-12);
  for (double p : {1e-5, 1e-4, 3e-3, 1e-2}) {
    const double m = 1.0;
    CHECK(std::abs(dispersion_energy(p, m) - p * p / (2.0 * m)) <= std::pow(p, 4) / std::pow(m, 3));
  }
}
