#pragma once

#include <complex>
#include <string>
#include <vector>

#include "levymass/spectrum.hpp"

namespace levymass {

using Complex = std::complex<double>;

/// How sqrt(1 + f) is continued where 1 + f < 0.
enum class BranchPolicy {
  /// Throw DomainError.
  Strict,
  /// Principal complex branch, sqrt(-s) = i sqrt(s).
  PrincipalComplex,
};

/// Element a p-slash + b of the algebra generated by p-slash at fixed p^2,
/// with p-slash p-slash = p^2. Every propagator and self-energy here lives in
/// it, so gamma matrices are never materialised.
struct SlashPair {
  Complex vector_coeff{0.0, 0.0};
  Complex scalar_part{0.0, 0.0};

  static SlashPair identity() { return {{0.0, 0.0}, {1.0, 0.0}}; }
};

using PropagatorValue = SlashPair;

SlashPair operator+(const SlashPair& x, const SlashPair& y);
SlashPair operator-(const SlashPair& x, const SlashPair& y);
/// Product at the given p^2.
SlashPair multiply(const SlashPair& x, const SlashPair& y, double p2);
/// (a p + b)^-1 = (a p - b) / (a^2 p^2 - b^2). Throws DegenerateError when
/// the norm vanishes.
SlashPair inverse(const SlashPair& x, double p2);
/// Largest coefficient modulus of x - y.
double distance(const SlashPair& x, const SlashPair& y);

/// m sqrt(1 + f(p^2 / m^2)) under the given continuation policy.
Complex running_mass(double p2, double m, const CutoffPolynomial& cutoff,
                     BranchPolicy policy = BranchPolicy::Strict);

/// 1 / (p^2 - m^2 [1 + f(p^2/m^2)] + i eps).
Complex kg_propagator(double p2, double m, const CutoffPolynomial& cutoff,
                      double epsilon);

/// (p-slash + M) / (p^2 - M^2 + i eps) with M = m sqrt(1 + f(p^2/m^2)),
/// i.e. the rationalised 1 / (p-slash - M).
PropagatorValue dirac_propagator(double p2, double m,
                                 const CutoffPolynomial& cutoff, double epsilon,
                                 BranchPolicy policy = BranchPolicy::Strict);

struct PowerCount {
  int degree_f = 0;
  int exponent_A = 0;
  int exponent_B = 0;
  bool convergent = false;
  std::string failing;  // "A", "B", "A and B" or empty
};

/// Large-k exponents of the radial self-energy integrands (k^3 measure
/// included) for a cutoff polynomial of the given degree.
PowerCount superficial_degree(int degree_f);

struct SelfEnergyScheme {
  /// Euclidean radial cutoff Lambda.
  double cutoff_radius = 50.0;
  double rel_tol = 1e-9;
  double abs_tol = 1e-13;
  int max_panels = 4000;
  BranchPolicy branch = BranchPolicy::Strict;
  /// Also evaluate at 2 Lambda for the stability diagnostic.
  bool doubling_check = true;
};

/// Convention string recorded alongside every self-energy value.
extern const char* const kSelfEnergyNormalization;

struct SelfEnergy {
  Complex A_tilde{0.0, 0.0};
  Complex B_tilde{0.0, 0.0};
  double coupling = 0.0;
  double p2 = 0.0;
  SelfEnergyScheme scheme{};
  /// B at 2 Lambda and |B(2 Lambda) - B(Lambda)| / |B(Lambda)|.
  Complex B_tilde_doubled{0.0, 0.0};
  Complex A_tilde_doubled{0.0, 0.0};
  double stability_B = 0.0;
  double stability_A = 0.0;
  std::string normalization;
};

/// Wick-rotated one-loop integral C = A p-slash + B with the modified fermion
/// propagator and a massless exchange, on a 2D radial x polar grid of the 4D
/// Euclidean ball of radius Lambda. Requires spacelike p2 < 0.
SelfEnergy self_energy_estimate(double p2, double m,
                                const CutoffPolynomial& cutoff,
                                double coupling,
                                const SelfEnergyScheme& scheme = {});

/// Angular integral over the 3-sphere polar angle of
/// sin^2(t) w(t) / (p^2 + k^2 - 2 p k cos t), with w = 1 (B part) or
/// w = cos t (A part); Euclidean magnitudes p, k > 0.
double polar_average(double p, double k, bool weighted_by_cos,
                     double rel_tol = 1e-11);

/// 1 / ((1 - A) p-slash - m sqrt(1 + f) - B), rationalised, with the same
/// i eps prescription as dirac_propagator. Throws DegenerateError at A = 1.
PropagatorValue resummed_propagator(double p2, double m,
                                    const CutoffPolynomial& cutoff,
                                    Complex A_tilde, Complex B_tilde,
                                    double epsilon = 0.0,
                                    BranchPolicy policy = BranchPolicy::Strict);
PropagatorValue resummed_propagator(double p2, double m,
                                    const CutoffPolynomial& cutoff,
                                    const SelfEnergy& self_energy,
                                    double epsilon = 0.0,
                                    BranchPolicy policy = BranchPolicy::Strict);

struct Pole {
  double p2 = 0.0;
  double x = 0.0;  // p^2 / m^2
  /// Sign of d/dx of the pole function at the root (residue information).
  int slope_sign = 0;
  /// False when 1 + f(x) < 0 there, so the candidate is rejected.
  bool branch_ok = true;
};

/// Left side of the pole equation in x = p^2 / m^2:
/// (1 - A)^2 x m^2 - (m sqrt(max(0, 1 + f(x))) + B)^2.
double pole_function(double x, double m, const CutoffPolynomial& cutoff,
                     double A_tilde, double B_tilde);

/// Solutions p^2 in [lo, hi] of the resummed pole equation with constant
/// A, B. With A = B = 0 it reduces to g(p^2/m^2) = 1.
std::vector<Pole> pole_search(double m, const CutoffPolynomial& cutoff,
                              double A_tilde, double B_tilde, double lo,
                              double hi, const RootScanOptions& options = {});

}  // namespace levymass
