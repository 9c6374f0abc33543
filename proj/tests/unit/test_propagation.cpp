#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "levymass/errors.hpp"
#include "levymass/propagation.hpp"
#include "oracles.hpp"

using namespace levymass;

namespace {

double sup_distance(const WaveState& a, const WaveState& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.amplitudes.size(); ++k) {
    d = std::max(d, std::abs(a.amplitudes[k] - b.amplitudes[k]));
  }
  return d;
}

}  // namespace

TEST_CASE("grid layout") {
  const Grid1D g(16, 8.0);
  CHECK(g.dx() == 0.5);
  CHECK(g.x(0) == -4.0);
  CHECK(g.mode(15) == -1);
  CHECK(g.wavenumber(1) == doctest::Approx(2.0 * oracle::kPi / 8.0));
  CHECK(g.slot_of(g.wavenumber(3)).value() == 3);
  CHECK(g.slot_of(g.wavenumber(13)).value() == 13);
  CHECK_FALSE(g.slot_of(0.1).has_value());
  CHECK_FALSE(g.slot_of(g.nyquist()).has_value());
  CHECK_THROWS_AS(Grid1D(12, 1.0), DomainError);
  CHECK_THROWS_AS(Grid1D(16, 0.0), DomainError);
}

TEST_CASE("transition density: Gaussian kind against the normal density") {
  const Grid1D g(256, 40.0);
  const double beta = 1.3, tau = 2.0, dt = 1.5;
  const auto td = transition_density(LevyExponent::gaussian(beta, tau), dt, g);
  const double variance = beta * beta * dt / tau;
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    worst = std::max(worst, std::abs(td.values[k] - oracle::normal_pdf(g.x(k), variance)));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("transition density: normalisation for every kind") {
  const Grid1D g(512, 64.0);
  LevyDensity expo{[](double x) { return std::exp(-std::abs(x)); }, 0.0, 1.0};
  for (const auto& e : {LevyExponent::relativistic(1.0), LevyExponent::gaussian(1.0),
                        LevyExponent::measure_defined(0.8, expo)}) {
    const auto td = transition_density(e, 1.0, g);
    double total = 0.0;
    for (double v : td.values) total += v * g.dx();
    CHECK(std::abs(total - 1.0) <= 1e-8);
    CHECK(std::abs(td.normalization_correction - 1.0) <= 1e-6);
  }
}

TEST_CASE("transition density: relativistic case against brute-force inversion") {
  const Grid1D g(256, 32.0);
  const auto e = LevyExponent::relativistic(1.0);
  const auto td = transition_density(e, e.tau(), g);
  auto log_cf = [](double u) { return eta_relativistic(u, 1.0); };
  for (int i = 0; i < 16; ++i) {
    const std::size_t k = 8 + 15 * i;
    // exp(eta) < 1e-17 beyond u = 40; Simpson error is far below 1e-6.
    const double ref = oracle::fourier_inversion(log_cf, g.x(k), 40.0, 40000);
    CAPTURE(g.x(k));
    CHECK(std::abs(td.values[k] - ref) <= 1e-6);
  }
}

TEST_CASE("transition density: aliasing is refused") {
  const auto e = LevyExponent::relativistic(1.0);
  CHECK_THROWS_AS(transition_density(e, 1.0, Grid1D(64, 8.0)), ResolutionError);
  // Too coarse: exp(eta) at Nyquist is still large for a tiny dt.
  CHECK_THROWS_AS(transition_density(e, 0.01, Grid1D(32, 32.0)), ResolutionError);
  CHECK_THROWS_AS(transition_density(e, -1.0, Grid1D(256, 32.0)), DomainError);
}

TEST_CASE("multiplier identities") {
  const Grid1D g(128, 20.0);
  const auto e = LevyExponent::relativistic(1.0);
  for (const auto& v : propagator_multiplier(e, 0.0, g)) CHECK(v == Complex(1.0, 0.0));
  for (const auto& v : propagator_multiplier(e, 0.7 * e.tau(), g)) {
    CHECK(std::abs(std::abs(v) - 1.0) <= 1e-15);
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double t1 = dist(rng), t2 = dist(rng);
    const auto a = propagator_multiplier(e, t1, g);
    const auto b = propagator_multiplier(e, t2, g);
    const auto c = propagator_multiplier(e, t1 + t2, g);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(a[j] * b[j] - c[j]) <= 1e-12);
  }
}

TEST_CASE("plane waves rotate at the kinetic energy") {
  const Grid1D g(64, 2.0 * oracle::kPi * 4.0);
  const auto e = LevyExponent::relativistic(1.0);
  const double u = g.wavenumber(5);
  const double dt = 0.3;
  const auto out = evolve(plane_wave(g, u), dt, e);
  const Complex expected = std::exp(Complex(0.0, dt * eta_relativistic(u, 1.0) / e.tau()));
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex ratio = out.amplitudes[k] / std::exp(Complex(0.0, u * g.x(k)));
    CHECK(std::abs(std::arg(ratio / expected)) <= 1e-6);
  }
  CHECK(dispersion_probe(e, u, dt, g) == doctest::Approx(dispersion_energy(u, 1.0)).epsilon(1e-9));
  CHECK_THROWS_AS(dispersion_probe(e, u * 1.01, dt, g), DomainError);
}

TEST_CASE("rest-energy phase is opt-in and relativistic-only") {
  const Grid1D g(64, 20.0);
  const auto e = LevyExponent::relativistic(2.0);
  EvolveOptions with_rest;
  with_rest.include_rest_energy = true;
  const auto a = propagator_multiplier(e, 0.5, g);
  const auto b = propagator_multiplier(e, 0.5, g, with_rest);
  CHECK(std::abs(b[3] / a[3] - std::exp(Complex(0.0, -1.0))) <= 1e-14);
  CHECK_THROWS_AS(propagator_multiplier(LevyExponent::gaussian(1.0), 0.5, g, with_rest),
                  DomainError);
}

TEST_CASE("unitarity and semigroup of evolution") {
  const Grid1D g(256, 40.0);
  const auto e = LevyExponent::relativistic(1.0);
  WaveState psi = gaussian_packet(g, -3.0, 1.0, 2.0);
  const double n0 = psi.norm();
  CHECK(n0 == doctest::Approx(1.0).epsilon(1e-12));
  const auto mult = propagator_multiplier(e, 0.01 * e.tau(), g);
  for (int s = 0; s < 100; ++s) apply_multiplier(psi, mult, 0.01 * e.tau());
  CHECK(std::abs(psi.norm() - n0) <= 1e-8);
  CHECK(psi.time == doctest::Approx(1.0));

  const auto start = gaussian_packet(g, 1.0, 0.8, -1.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double t1 = dist(rng), t2 = dist(rng);
    const auto two_steps = evolve(evolve(start, t1, e), t2, e);
    const auto one_step = evolve(start, t1 + t2, e);
    CHECK(sup_distance(two_steps, one_step) <= 1e-10);
  }
}

TEST_CASE("generator on constants and plane waves") {
  const Grid1D g(32, 2.0 * oracle::kPi * 2.0);
  const auto e = LevyExponent::relativistic(1.0);
  WaveState constant(g, std::vector<Complex>(g.size(), Complex(1.0, 0.0)));
  for (const auto& v : generator_apply(constant, e).amplitudes) CHECK(std::abs(v) <= 1e-12);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> mode(-7, 7);
  for (int trial = 0; trial < 8; ++trial) {
    const double u = 2.0 * oracle::kPi * mode(rng) / g.length();
    const auto psi = plane_wave(g, u);
    const auto h = generator_apply(psi, e);
    const double energy = -e.mass() * eta_relativistic(u, e.mass());
    for (std::size_t k = 0; k < g.size(); k += 5) {
      const Complex expected = energy * psi.amplitudes[k];
      CHECK(std::abs(h.amplitudes[k] - expected) <= 1e-5 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("generator matches the time derivative of the evolution") {
  const Grid1D g(64, 24.0);
  const auto e = LevyExponent::relativistic(1.0);
  const auto psi = gaussian_packet(g, 0.0, 1.5, 0.5);
  const auto h = generator_apply(psi, e);
  // i d/dt psi = H psi with psi(t) = evolve(psi, t); Richardson on the
  // forward difference (i/dt)(psi(dt) - psi).
  auto diff = [&](double dt) {
    const auto next = evolve(psi, dt, e);
    std::vector<Complex> d(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      d[k] = Complex(0.0, 1.0) * (next.amplitudes[k] - psi.amplitudes[k]) / dt;
    }
    return d;
  };
  const auto d1 = diff(1e-3);
  const auto d2 = diff(5e-4);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex richardson = 2.0 * d2[k] - d1[k];
    worst = std::max(worst, std::abs(richardson - h.amplitudes[k]));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("dispersion probe examples") {
  const auto e = LevyExponent::relativistic(1.0);
  const Grid1D zero_grid(64, 20.0);
  CHECK(dispersion_probe(e, 0.0, 0.5, zero_grid) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  // Grid lengths chosen so that u is mode 3.
  const Grid1D g34(64, 2.0 * oracle::kPi * 3.0 / 0.75);
  CHECK(std::abs(dispersion_probe(e, 0.75, 0.5, g34) - 0.25) <= 1e-6);
  const Grid1D g2(64, 2.0 * oracle::kPi * 3.0 / 2.0);
  CHECK(std::abs(dispersion_probe(e, 2.0, 0.5, g2) - (std::sqrt(5.0) - 1.0)) <= 1e-6);
}
