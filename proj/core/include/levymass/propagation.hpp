#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "levymass/levy_core.hpp"

namespace levymass {

using Complex = std::complex<double>;

/// Uniform periodic grid x_k = -L/2 + k dx, k in [0, n), with dual
/// wavenumbers u = 2 pi j / L, j in [-n/2, n/2). Arrays indexed in
/// wavenumber space use FFT order (j >= n/2 stands for j - n).
class Grid1D {
 public:
  Grid1D(std::size_t n, double length);

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_); }
  double x(std::size_t k) const noexcept {
    return -0.5 * length_ + static_cast<double>(k) * dx();
  }
  /// Signed mode number of FFT slot j.
  long mode(std::size_t j) const noexcept {
    const long jj = static_cast<long>(j);
    return jj < static_cast<long>(n_ / 2) ? jj : jj - static_cast<long>(n_);
  }
  double wavenumber(std::size_t j) const noexcept;
  double nyquist() const noexcept;
  /// FFT slot of u if u lies on the dual grid (strictly below Nyquist).
  std::optional<std::size_t> slot_of(double u) const noexcept;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  std::size_t n_;
  double length_;
};

struct WaveState {
  Grid1D grid;
  std::vector<Complex> amplitudes;
  double time = 0.0;

  WaveState(Grid1D g, std::vector<Complex> amps, double t = 0.0);

  /// Discrete L2 norm sqrt(dx sum |psi_k|^2).
  double norm() const;
};

/// Plane wave e^{iux} sampled on the grid.
WaveState plane_wave(const Grid1D& grid, double u);
/// Normalised Gaussian packet centred at x0 with width sigma and carrier k0.
WaveState gaussian_packet(const Grid1D& grid, double x0, double sigma,
                          double k0 = 0.0);

struct TransitionDensity {
  Grid1D grid;
  std::vector<double> values;
  double horizon = 0.0;
  /// Factor applied to force a trapezoidal integral of exactly one.
  double normalization_correction = 1.0;
  /// Mass on the outer 5% of the grid at each end.
  double edge_mass = 0.0;
  /// Most negative raw value before clipping, and how many points were clipped.
  double min_value = 0.0;
  std::size_t clipped = 0;
};

/// Values below this are treated as spectral ringing and clipped to it.
inline constexpr double kNegativityFloor = -1e-12;
/// Edge-mass and spectral-tail thresholds for the aliasing diagnostic.
inline constexpr double kAliasingThreshold = 1e-6;

/// eta(u_j) for every FFT slot of the grid (uses evenness of eta).
std::vector<double> eta_on_grid(const LevyExponent& exponent,
                                const Grid1D& grid,
                                const QuadratureSpec& quad = {});

/// Density of the increment over dt: inverse DFT of exp((dt/tau) eta(u)).
/// Throws ResolutionError when the characteristic function is not resolved
/// at the Nyquist wavenumber or the edge mass exceeds the aliasing threshold.
TransitionDensity transition_density(const LevyExponent& exponent, double dt,
                                     const Grid1D& grid,
                                     const QuadratureSpec& quad = {});

struct EvolveOptions {
  /// Multiply by e^{-i m dt}, restoring the rest-energy phase. Only valid
  /// for the relativistic kind.
  bool include_rest_energy = false;
  QuadratureSpec quad{};
};

/// exp(i dt eta(u_j) / tau) in FFT order.
std::vector<Complex> propagator_multiplier(const LevyExponent& exponent,
                                           double dt, const Grid1D& grid,
                                           const EvolveOptions& options = {});

/// Free Levy-Schrodinger evolution by dt through the Fourier multiplier.
WaveState evolve(const WaveState& state, double dt,
                 const LevyExponent& exponent,
                 const EvolveOptions& options = {});

/// Applies the multiplier to a state in place; multiplier must match the grid.
void apply_multiplier(WaveState& state, const std::vector<Complex>& multiplier,
                      double dt);

/// Real-space generator -(1/tau) [ beta^2/2 psi'' + integral (psi(x+y) - psi(x)) W(y) dy ]
/// evaluated point by point with the symmetrised jump integrand
/// psi(x+y) + psi(x-y) - 2 psi(x) on (0, inf). Off-grid values come from the
/// trigonometric interpolant of the state.
WaveState generator_apply(const WaveState& state,
                          const LevyExponent& exponent,
                          const QuadratureSpec& quad = {});

/// Evolves the plane wave e^{iux} for one step and reads the kinetic energy
/// from its phase rotation. Requires 0 <= E dt < 2 pi; u must be on the
/// dual grid.
double dispersion_probe(const LevyExponent& exponent, double u, double dt,
                        const Grid1D& grid);

}  // namespace levymass
