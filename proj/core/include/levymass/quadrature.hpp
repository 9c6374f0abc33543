#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace levymass {

/// How a semi-infinite panel [a, inf) is folded onto a finite interval.
enum class TailTransform {
  /// x = a * e^t, truncated 60 decay lengths beyond a. Needs a finite tail scale.
  Exponential,
  /// x = a + t / (1 - t) on t in [0, 1). No assumption on the decay.
  Rational,
};

struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  /// Extra breakpoints; the driver never places a panel across one of them.
  std::vector<double> split_points;
  TailTransform tail_transform = TailTransform::Exponential;
  /// Upper bound on the number of live panels before giving up.
  int max_panels = 4000;

  /// Throws DomainError unless both tolerances are positive and the budget is sane.
  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod integration of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// error falls below max(abs_tol, rel_tol * |value|). Split points of the QuadratureSpec
/// that fall strictly inside (a, b) become initial panel boundaries. Throws
/// ConvergenceError (carrying the partial estimate) when the panel budget is
/// exhausted.
QuadResult integrate(const Integrand& f, double a, double b,
                     const QuadratureSpec& spec);

/// Same as integrate() but starts from the given ordered breakpoints.
QuadResult integrate_breaks(const Integrand& f, std::vector<double> breaks,
                            const QuadratureSpec& spec);

/// Integral of f over [a, inf). tail_scale is the decay length of f, used by
/// TailTransform::Exponential; pass infinity when unknown (forces Rational).
QuadResult integrate_to_infinity(
    const Integrand& f, double a, const QuadratureSpec& spec,
    double tail_scale = std::numeric_limits<double>::infinity());

/// Result of summing an integral shell by shell over dyadic intervals.
struct ShellSum {
  double value = 0.0;
  double abs_error = 0.0;
  int shells = 0;
  /// False when the shell contributions stop decaying (divergence) or decay
  /// too slowly to certify a finite value within the shell budget.
  bool converged = false;
  bool divergent = false;
};

enum class ShellDirection {
  /// Shells [edge 2^-(k+1), edge 2^-k], k = 0, 1, ... covering (0, edge].
  Inward,
  /// Shells [edge 2^k, edge 2^(k+1)], k = 0, 1, ... covering [edge, inf).
  Outward,
};

/// Integrates f over (0, edge] or [edge, inf) one dyadic shell at a time,
/// watching the shell contributions. A non-integrable singularity or tail
/// shows up as contributions that stop shrinking, which is reported through
/// the divergent flag instead of being silently truncated.
ShellSum integrate_dyadic(const Integrand& f, double edge,
                          ShellDirection direction, const QuadratureSpec& spec,
                          int max_shells = 1000);

/// Single non-adaptive 21-point Kronrod panel with its embedded 10-point
/// Gauss error estimate. Exposed for tests and for callers that do their own
/// subdivision.
QuadResult gauss_kronrod21(const Integrand& f, double a, double b);

}  // namespace levymass
