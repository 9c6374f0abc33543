#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace levymass {

/// f(x) = lambda0 + lambda1 x + lambda2 x^2 + lambda3 x^3 with f(1) = 0.
struct CutoffPolynomial {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;

  /// Fixes lambda0 = -(lambda1 + lambda2 + lambda3).
  static CutoffPolynomial constrained(double lambda1, double lambda2,
                                      double lambda3);
  /// Takes all four coefficients and checks |f(1)| <= 1e-12 * scale.
  static CutoffPolynomial from_coefficients(double lambda0, double lambda1,
                                            double lambda2, double lambda3);
  static CutoffPolynomial zero() { return {}; }

  double operator()(double x) const noexcept {
    return lambda0 + x * (lambda1 + x * (lambda2 + x * lambda3));
  }
  double derivative(double x) const noexcept {
    return lambda1 + x * (2.0 * lambda2 + 3.0 * x * lambda3);
  }
  /// g(x) = x - f(x); the spectrum lives on g(x) = 1.
  double g(double x) const noexcept { return x - (*this)(x); }
  /// Magnitude against which residuals of g are judged.
  double scale(double x) const noexcept;
  int degree() const noexcept;
  std::array<double, 4> coefficients() const noexcept {
    return {lambda0, lambda1, lambda2, lambda3};
  }
};

enum class RootStatus { RealPositive, NonPositive, Complex };

struct Root {
  double value = 0.0;  // real part
  double imag = 0.0;
  RootStatus status = RootStatus::RealPositive;
  int multiplicity = 1;
  std::string label;  // "1", "x+" or "x-"

  bool accepted() const noexcept { return status == RootStatus::RealPositive; }
};

/// Solutions of g(x) = 1 for a cubic cutoff: the fixed root 1 and x+-.
struct RootSet {
  std::array<Root, 3> roots;
  /// (lambda2 - lambda3)^2 - 4 lambda1 lambda3 - 4 lambda3^2 + 4 lambda3.
  double discriminant = 0.0;
  bool degenerate = false;

  std::vector<double> accepted_values() const;
};

/// Coefficients whose g(x) - 1 = -lambda3 (x - 1)(x - x_plus)(x - x_minus).
/// Throws DegenerateError for lambda3 = 0, DomainError for non-positive roots.
CutoffPolynomial cutoff_from_roots(double x_plus, double x_minus,
                                   double lambda3);

/// Closed-form roots of g(x) = 1, each polished by one Newton step on
/// g(x) - 1 and classified. Throws DegenerateError for lambda3 = 0.
RootSet roots_from_cutoff(const CutoffPolynomial& cutoff);

struct MassLevel {
  double mass = 0.0;
  double root = 0.0;
  std::string source;  // label of the root that produced it
};

struct MassSpectrum {
  double m_base = 0.0;
  std::vector<MassLevel> masses;  // ascending
  std::vector<Root> rejected;
  bool degenerate = false;
  bool complete() const noexcept { return masses.size() == 3; }
};

/// M_i = m sqrt(x_i) for every accepted root, sorted ascending.
MassSpectrum mass_spectrum(double m, const CutoffPolynomial& cutoff);

/// E(p) = sqrt(m^2 x + p^2) on the branch x of g^{-1}(1); the kinetic
/// variant subtracts the rescaled rest energy m sqrt(x). Throws DomainError
/// when x <= 0 or x does not solve g(x) = 1.
double modified_dispersion(double p, double m, const CutoffPolynomial& cutoff,
                           double branch_x, bool kinetic = false);

struct RootScanOptions {
  int panels = 1024;
  /// Depth of local re-scans around minima of |h| that hide a root pair.
  int refine_depth = 4;
  int refine_panels = 64;
};

/// All sign-change roots of h on [lo, hi]: uniform bracketing scan, exact
/// zeros at knots taken as roots, bisection to full precision, and re-scans
/// near local minima of |h| so that close pairs inside one panel are found.
/// Points where h is NaN are skipped.
std::vector<double> scan_roots(const std::function<double(double)>& h,
                               double lo, double hi,
                               const RootScanOptions& options = {});

/// Roots of g(x) = x - f(x) = 1 on [lo, hi] whose residual |g(x) - 1| is at
/// most tolerance. An empty result is not an error.
std::vector<double> g_solve(const std::function<double(double)>& f, double lo,
                            double hi, double tolerance,
                            const RootScanOptions& options = {});

}  // namespace levymass
