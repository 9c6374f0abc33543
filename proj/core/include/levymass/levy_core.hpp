#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>

#include "levymass/quadrature.hpp"

namespace levymass {

/// Absolutely continuous, symmetric Levy density W(x) = W(-x) > 0 for x != 0.
struct LevyDensity {
  std::function<double(double)> evaluate;
  /// s such that W(x) |x|^s has a finite nonzero limit at 0.
  double singularity_order = 2.0;
  /// Decay length of the exponential tail; infinity for power-law tails.
  double tail_scale = std::numeric_limits<double>::infinity();

  double operator()(double x) const { return evaluate(x); }
};

/// The Bessel-kernel density K_1(m|x|) / (pi |x|) of the relativistic process.
LevyDensity relativistic_density(double mass);

struct Relativistic {
  double mass;
};
struct Gaussian {
  double beta;
};
struct MeasureDefined {
  double beta;
  LevyDensity density;
};

/// Logarithmic characteristic eta(u) = log phi(u) of a symmetric, centred
/// infinitely divisible law, together with its time scale tau.
///
/// Only the symmetric Levy-Khintchin form is representable; there is no drift
/// and no compensator term. Natural units (hbar = c = 1) throughout, so the
/// relativistic kind has tau = 1/m and a = 1/m.
class LevyExponent {
 public:
  using Kind = std::variant<Relativistic, Gaussian, MeasureDefined>;

  static LevyExponent relativistic(double mass);
  static LevyExponent gaussian(double beta, double tau = 1.0);
  static LevyExponent measure_defined(double beta, LevyDensity density,
                                      double tau = 1.0);
  /// Full triplet constructor; throws DomainError for any nonzero drift.
  static LevyExponent from_triplet(double drift, double beta,
                                   LevyDensity density, double tau = 1.0);

  const Kind& kind() const noexcept { return kind_; }
  double tau() const noexcept { return tau_; }
  bool is_relativistic() const noexcept {
    return std::holds_alternative<Relativistic>(kind_);
  }
  /// Mass of the relativistic kind; throws DomainError for other kinds.
  double mass() const;
  /// Diffusion scale (0 for the pure-jump relativistic kind).
  double beta() const noexcept;
  /// Jump density, if any. The relativistic kind reports its Bessel kernel.
  const LevyDensity* density() const noexcept;

  /// eta(u): closed form when one exists, quadrature otherwise.
  double eta(double u) const;
  double eta(double u, const QuadratureSpec& quad) const;

  std::string describe() const;

 private:
  LevyExponent(Kind kind, double tau);

  Kind kind_;
  double tau_;
  LevyDensity jump_density_;  // cached for the relativistic kind
};

/// 1 - sqrt(1 + u^2/m^2).
double eta_relativistic(double u, double mass);

struct EtaEstimate {
  double value = 0.0;
  double abs_error = 0.0;
};

/// -beta^2 u^2 / 2 + integral of (cos(ux) - 1) W(x) dx by adaptive quadrature.
/// The integral is folded onto (0, inf), split at the tail scale and the
/// remaining tail mapped through quad.tail_transform.
EtaEstimate eta_from_measure(double u, const LevyExponent& exponent,
                             const QuadratureSpec& quad = {});

/// K_1(m|x|) / (pi |x|); throws DomainError at x = 0.
double levy_density_1d(double x, double mass);

/// (m / (2 pi^2 r^2)) K_2(m r), the three dimensional radial density.
double levy_density_3d(double r, double mass);

struct MeasureReport {
  double small_jump_mass = 0.0;  // integral over |x| <= 1 of x^2 W
  double tail_mass = 0.0;        // integral over |x| > 1 of W
  bool ok = false;
  std::string diagnostic;
};

/// Numerically certifies the Levy measure condition (x^2 ^ 1) integrable.
MeasureReport validate_levy_measure(const LevyDensity& density,
                                    const QuadratureSpec& quad = {});

/// Relativistic kinetic energy sqrt(m^2 + p^2) - m, evaluated without
/// cancellation at small p.
double dispersion_energy(double p, double mass);

}  // namespace levymass
