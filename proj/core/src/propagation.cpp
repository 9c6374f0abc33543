#include "levymass/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "levymass/errors.hpp"
#include "levymass/fft.hpp"

namespace levymass {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Fourier coefficients c_j with psi(x) = sum_j c_j e^{i u_j (x - x_0)}.
std::vector<Complex> coefficients(const WaveState& state) {
  std::vector<Complex> c = state.amplitudes;
  fft_inplace(c, FftDirection::Forward);
  const double inv_n = 1.0 / static_cast<double>(c.size());
  for (auto& v : c) v *= inv_n;
  return c;
}

}  // namespace

Grid1D::Grid1D(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 8 || !is_power_of_two(n)) {
    throw DomainError("grid size must be a power of two and at least 8");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("grid length must be positive");
  }
}

double Grid1D::wavenumber(std::size_t j) const noexcept {
  return kTwoPi * static_cast<double>(mode(j)) / length_;
}

double Grid1D::nyquist() const noexcept {
  return std::numbers::pi / dx();
}

std::optional<std::size_t> Grid1D::slot_of(double u) const noexcept {
  const double index = u * length_ / kTwoPi;
  const double rounded = std::round(index);
  if (std::abs(index - rounded) > 1e-9 * std::max(1.0, std::abs(index))) {
    return std::nullopt;
  }
  const long j = static_cast<long>(rounded);
  const long half = static_cast<long>(n_ / 2);
  if (j <= -half || j >= half) return std::nullopt;
  return static_cast<std::size_t>(j >= 0 ? j : j + static_cast<long>(n_));
}

WaveState::WaveState(Grid1D g, std::vector<Complex> amps, double t)
    : grid(g), amplitudes(std::move(amps)), time(t) {
  if (amplitudes.size() != grid.size()) {
    throw ShapeError("amplitude count does not match the grid");
  }
}

double WaveState::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return std::sqrt(sum * grid.dx());
}

WaveState plane_wave(const Grid1D& grid, double u) {
  std::vector<Complex> amps(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    amps[k] = std::polar(1.0, u * grid.x(k));
  }
  return WaveState(grid, std::move(amps));
}

WaveState gaussian_packet(const Grid1D& grid, double x0, double sigma,
                          double k0) {
  if (!(sigma > 0.0)) throw DomainError("packet width must be positive");
  std::vector<Complex> amps(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = grid.x(k) - x0;
    amps[k] = std::polar(std::exp(-0.25 * d * d / (sigma * sigma)), k0 * grid.x(k));
  }
  WaveState s(grid, std::move(amps));
  const double inv = 1.0 / s.norm();
  for (auto& a : s.amplitudes) a *= inv;
  return s;
}

std::vector<double> eta_on_grid(const LevyExponent& exponent,
                                const Grid1D& grid,
                                const QuadratureSpec& quad) {
  const std::size_t n = grid.size();
  std::vector<double> eta(n);
  for (std::size_t j = 0; j <= n / 2; ++j) {
    // Slot n/2 holds -Nyquist; eta is even so the sign does not matter.
    const double u = std::abs(grid.wavenumber(j));
    eta[j] = exponent.eta(u, quad);
    if (j > 0 && j < n / 2) eta[n - j] = eta[j];
  }
  return eta;
}

TransitionDensity transition_density(const LevyExponent& exponent, double dt,
                                     const Grid1D& grid,
                                     const QuadratureSpec& quad) {
  if (!(dt > 0.0)) throw DomainError("transition density needs dt > 0");
  const std::size_t n = grid.size();
  const double power = dt / exponent.tau();
  const auto eta = eta_on_grid(exponent, grid, quad);

  const double cf_nyquist = std::exp(power * eta[n / 2]);
  if (cf_nyquist > kAliasingThreshold) {
    std::ostringstream msg;
    msg << "characteristic function not resolved: |phi(u_max)|^(dt/tau) = "
        << cf_nyquist << " exceeds " << kAliasingThreshold
        << "; refine the grid spacing";
    throw ResolutionError(msg.str(), cf_nyquist);
  }

  // p(x_k) = (1/L) sum_j phi_j e^{-i u_j x_k}; the x_0 offset becomes a phase.
  const double x0 = grid.x(0);
  std::vector<Complex> spectrum(n);
  for (std::size_t j = 0; j < n; ++j) {
    spectrum[j] = std::polar(std::exp(power * eta[j]), -grid.wavenumber(j) * x0);
  }
  fft_inplace(spectrum, FftDirection::Forward);

  TransitionDensity out{grid, std::vector<double>(n), dt};
  const double inv_length = 1.0 / grid.length();
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = spectrum[k].real() * inv_length;
    total += out.values[k];
  }
  total *= grid.dx();
  out.normalization_correction = 1.0 / total;

  out.min_value = *std::min_element(out.values.begin(), out.values.end()) *
                  out.normalization_correction;
  const double edge = 0.45 * grid.length();
  for (std::size_t k = 0; k < n; ++k) {
    double& v = out.values[k];
    v *= out.normalization_correction;
    if (std::abs(grid.x(k)) >= edge) out.edge_mass += std::abs(v) * grid.dx();
    if (v < kNegativityFloor) {
      v = kNegativityFloor;
      ++out.clipped;
    }
  }
  if (out.edge_mass > kAliasingThreshold) {
    std::ostringstream msg;
    msg << "density mass " << out.edge_mass
        << " at the grid edge exceeds " << kAliasingThreshold
        << "; enlarge the grid length";
    throw ResolutionError(msg.str(), out.edge_mass);
  }
  return out;
}

std::vector<Complex> propagator_multiplier(const LevyExponent& exponent,
                                           double dt, const Grid1D& grid,
                                           const EvolveOptions& options) {
  double rest_phase = 0.0;
  if (options.include_rest_energy) {
    rest_phase = -exponent.mass() * dt;  // throws for non-relativistic kinds
  }
  const auto eta = eta_on_grid(exponent, grid, options.quad);
  const double rate = dt / exponent.tau();
  std::vector<Complex> mult(grid.size());
  for (std::size_t j = 0; j < mult.size(); ++j) {
    mult[j] = std::polar(1.0, rate * eta[j] + rest_phase);
  }
  return mult;
}

void apply_multiplier(WaveState& state, const std::vector<Complex>& multiplier,
                      double dt) {
  if (multiplier.size() != state.grid.size()) {
    throw ShapeError("multiplier length does not match the grid");
  }
  auto& amps = state.amplitudes;
  fft_inplace(amps, FftDirection::Forward);
  const double inv_n = 1.0 / static_cast<double>(amps.size());
  for (std::size_t j = 0; j < amps.size(); ++j) amps[j] *= multiplier[j] * inv_n;
  fft_inplace(amps, FftDirection::Backward);
  state.time += dt;
}

WaveState evolve(const WaveState& state, double dt,
                 const LevyExponent& exponent, const EvolveOptions& options) {
  WaveState next = state;
  apply_multiplier(next, propagator_multiplier(exponent, dt, state.grid, options),
                   dt);
  return next;
}

WaveState generator_apply(const WaveState& state,
                          const LevyExponent& exponent,
                          const QuadratureSpec& quad) {
  quad.validate();
  const Grid1D& grid = state.grid;
  const std::size_t n = grid.size();
  auto c = coefficients(state);

  double energy = 0.0;
  for (const auto& v : c) energy += std::norm(v);
  if (energy > 0.0 && std::norm(c[n / 2]) > 1e-8 * energy) {
    throw ResolutionError("state has weight on the Nyquist mode; it is not "
                          "resolved by the grid",
                          std::norm(c[n / 2]) / energy);
  }

  std::vector<double> u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = grid.wavenumber(j);

  const double inv_tau = 1.0 / exponent.tau();
  const double beta = exponent.beta();
  const LevyDensity* density = exponent.density();

  std::vector<Complex> out(n);
  std::vector<Complex> d(n);
  for (std::size_t k = 0; k < n; ++k) {
    // d_j = c_j e^{i u_j (x_k - x_0)} so that psi(x_k + y) = sum_j d_j e^{i u_j y}.
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = c[j] * std::polar(1.0, kTwoPi * static_cast<double>(j * k % n) /
                                        static_cast<double>(n));
    }

    Complex diffusion{0.0, 0.0};
    if (beta > 0.0) {
      for (std::size_t j = 0; j < n; ++j) diffusion -= u[j] * u[j] * d[j];
      diffusion *= 0.5 * beta * beta;
    }

    Complex jumps{0.0, 0.0};
    if (density != nullptr) {
      // psi(x+y) + psi(x-y) - 2 psi(x) = -4 sum_j d_j sin^2(u_j y / 2).
      auto symmetrised = [&](double y, bool imag) {
        if (y == 0.0) return 0.0;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double s = std::sin(0.5 * u[j] * y);
          acc += (imag ? d[j].imag() : d[j].real()) * s * s;
        }
        return -4.0 * acc * (*density)(y);
      };
      const double split =
          std::isfinite(density->tail_scale) ? density->tail_scale : 1.0;
      double parts[2] = {0.0, 0.0};
      try {
        for (int part = 0; part < 2; ++part) {
          const bool imag = part == 1;
          const Integrand f = [&](double y) { return symmetrised(y, imag); };
          parts[part] =
              integrate(f, 0.0, split, quad).value +
              integrate_to_infinity(f, split, quad, density->tail_scale).value;
        }
      } catch (const ConvergenceError& e) {
        std::ostringstream msg;
        msg << "generator quadrature failed at grid point " << k
            << " (x = " << grid.x(k) << "): " << e.what();
        throw ConvergenceError(msg.str(), e.partial_estimate(),
                               e.error_estimate());
      }
      jumps = {parts[0], parts[1]};
    }
    out[k] = -inv_tau * (diffusion + jumps);
  }
  return WaveState(grid, std::move(out), state.time);
}

double dispersion_probe(const LevyExponent& exponent, double u, double dt,
                        const Grid1D& grid) {
  if (!grid.slot_of(u)) {
    throw DomainError("probe wavenumber is not on the dual grid");
  }
  if (!(dt > 0.0)) throw DomainError("probe step dt must be positive");
  const WaveState before = plane_wave(grid, u);
  const WaveState after = evolve(before, dt, exponent);
  Complex overlap{0.0, 0.0};
  double weight = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    overlap += std::conj(before.amplitudes[k]) * after.amplitudes[k];
    weight += std::norm(before.amplitudes[k]);
  }
  double phase = std::arg(overlap / weight);
  // Kinetic energy is non-negative, so the rotation is clockwise.
  if (phase > 1e-12) phase -= kTwoPi;
  return -phase / dt;
}

}  // namespace levymass
