#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levymass/errors.hpp"
#include "levymass/quadrature.hpp"
#include "oracles.hpp"

using namespace levymass;

TEST_CASE("polynomials are exact on one panel") {
  const auto r = gauss_kronrod21([](double x) { return x * x * x - 2.0 * x; }, 0.0, 2.0);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
  CHECK(r.abs_error <= 1e-13);
}

TEST_CASE("adaptive integration of an endpoint singularity") {
  QuadratureSpec spec;
  const auto r = integrate([](double x) { return std::log(x); }, 0.0, 1.0, spec);
  CHECK(std::abs(r.value + 1.0) <= 1e-11);
  CHECK(r.abs_error <= 1e-10);
}

TEST_CASE("break points around a kink") {
  QuadratureSpec spec;
  const auto r = integrate_breaks([](double x) { return std::abs(x - 0.3); },
                                  {0.0, 0.3, 1.0}, spec);
  CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-14));
}

TEST_CASE("semi-infinite integrals with both tail maps") {
  QuadratureSpec exp_spec;
  const auto e = integrate_to_infinity([](double x) { return std::exp(-x); }, 1.0,
                                       exp_spec, 1.0);
  CHECK(e.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  QuadratureSpec rat_spec;
  rat_spec.tail_transform = TailTransform::Rational;
  const auto r = integrate_to_infinity([](double x) { return 1.0 / (x * x * x); },
                                       1.0, rat_spec);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("budget exhaustion raises ConvergenceError with a partial estimate") {
  QuadratureSpec spec;
  spec.max_panels = 3;
  spec.rel_tol = 1e-14;
  spec.abs_tol = 1e-300;
  try {
    integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, spec);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::isfinite(e.partial_estimate()));
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("dyadic shells separate convergent and divergent small-x behaviour") {
  QuadratureSpec spec;
  const auto ok = integrate_dyadic([](double x) { return std::sqrt(x); }, 1.0,
                                   ShellDirection::Inward, spec);
  CHECK(ok.converged);
  CHECK(ok.value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  const auto bad = integrate_dyadic([](double x) { return 1.0 / x; }, 1.0,
                                    ShellDirection::Inward, spec);
  CHECK(bad.divergent);
  CHECK_FALSE(bad.converged);

  const auto tail = integrate_dyadic([](double x) { return 1.0 / (x * x); }, 1.0,
                                     ShellDirection::Outward, spec);
  CHECK(tail.converged);
  CHECK(tail.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spec validation") {
  QuadratureSpec spec;
  spec.rel_tol = -1.0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
  QuadratureSpec ok;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("agreement with a brute-force Simpson sum") {
  auto f = [](double x) { return std::exp(-x) * std::cos(5.0 * x); };
  QuadratureSpec spec;
  const double ref = oracle::simpson(f, 0.0, 3.0, 200000);
  CHECK(integrate(f, 0.0, 3.0, spec).value == doctest::Approx(ref).epsilon(1e-12));
}
