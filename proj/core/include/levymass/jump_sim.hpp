#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "levymass/levy_core.hpp"

namespace levymass {

struct JumpSimConfig {
  /// Jumps smaller than epsilon are replaced by a Gaussian (or dropped).
  double epsilon = 1e-3;
  std::size_t n_paths = 1000;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  bool gaussian_compensation = true;
  /// Worker threads; 0 picks hardware concurrency. Results do not depend on it.
  unsigned threads = 0;

  void validate() const;
};

struct JumpCountStats {
  double mean = 0.0;
  std::uint64_t max = 0;
};

struct PathEnsemble {
  std::vector<double> increments;  // X(horizon) for each path
  JumpSimConfig config;
  JumpCountStats jump_counts;
  /// Expected jumps per path, Lambda(epsilon) * t / tau.
  double jump_rate = 0.0;
  /// Variance of the Gaussian replacing jumps below epsilon (0 if disabled).
  double compensation_variance = 0.0;
};

/// Above this many expected jumps per path sampling is refused.
inline constexpr double kMaxJumpsPerPath = 1e7;
/// Knots of the inverse-CDF table for the jump sizes.
inline constexpr std::size_t kJumpTableKnots = 4096;

/// sigma^2(eps): integral of x^2 W over |x| < eps.
/// Throws DomainError when the integral diverges.
double small_jump_variance(const LevyDensity& density, double epsilon,
                           const QuadratureSpec& quad = {});

/// Monotone table of the normalised jump-size CDF on [epsilon, x_max],
/// knots log-spaced. Inversion is linear between knots.
class JumpSizeTable {
 public:
  JumpSizeTable(const LevyDensity& density, double epsilon,
                const QuadratureSpec& quad = {});

  /// Integral of W over |x| > epsilon (both signs).
  double total_mass() const noexcept { return total_mass_; }
  /// |jump| for a uniform variate in [0, 1).
  double invert(double uniform) const noexcept;
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& cdf() const noexcept { return cdf_; }

 private:
  std::vector<double> knots_;
  std::vector<double> cdf_;
  double total_mass_ = 0.0;
};

/// Terminal increments X(t) of the pure-jump process (plus any diffusion
/// part) as compound Poisson with Gaussian small-jump compensation. Each path
/// draws from its own substream derived from (seed, path index), so the
/// ensemble is bit-identical for any thread count.
PathEnsemble sample_increments(const LevyExponent& exponent,
                               const JumpSimConfig& config,
                               const QuadratureSpec& quad = {});

struct EmpiricalCf {
  std::vector<std::complex<double>> value;
  /// Standard errors of the real and imaginary parts.
  std::vector<double> stderr_real;
  std::vector<double> stderr_imag;
};

/// (1/n) sum_k e^{i u X_k} with per-component standard errors.
EmpiricalCf empirical_cf(const PathEnsemble& ensemble,
                         std::span<const double> u_values);

struct MomentEstimate {
  double mean = 0.0;
  double variance = 0.0;
  double stderr_mean = 0.0;
  double stderr_variance = 0.0;
};

MomentEstimate sample_moments(const PathEnsemble& ensemble);

/// SplitMix64 finaliser, used to derive per-path seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace levymass
