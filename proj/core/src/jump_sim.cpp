#include "levymass/jump_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "levymass/errors.hpp"

namespace levymass {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Finds x_max beyond which the one-sided jump mass is negligible.
double table_extent(const LevyDensity& density, double epsilon,
                    const QuadratureSpec& quad) {
  if (std::isfinite(density.tail_scale)) {
    return std::max(2.0 * epsilon, epsilon + 40.0 * density.tail_scale);
  }
  const Integrand w = [&](double x) { return density(x); };
  double x = std::max(2.0 * epsilon, 1.0);
  double mass = integrate(w, epsilon, x, quad).value;
  for (int doubling = 0; doubling < 60; ++doubling) {
    const double shell = integrate(w, x, 2.0 * x, quad).value;
    mass += shell;
    x *= 2.0;
    if (shell < 1e-14 * mass) return x;
  }
  throw BudgetError("jump-size table: tail of the Levy density decays too "
                    "slowly to tabulate");
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void JumpSimConfig::validate() const {
  if (!(epsilon > 0.0)) throw DomainError("truncation epsilon must be positive");
  if (n_paths < 1) throw DomainError("need at least one path");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
}

double small_jump_variance(const LevyDensity& density, double epsilon,
                           const QuadratureSpec& quad) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const Integrand f = [&](double x) { return x * x * density(x); };
  const auto shells = integrate_dyadic(f, epsilon, ShellDirection::Inward, quad);
  if (shells.divergent) {
    throw DomainError("small-jump second moment diverges: not a Levy measure");
  }
  if (!shells.converged) {
    throw ConvergenceError("small-jump second moment not certified",
                           2.0 * shells.value, 2.0 * shells.abs_error);
  }
  return 2.0 * shells.value;
}

JumpSizeTable::JumpSizeTable(const LevyDensity& density, double epsilon,
                             const QuadratureSpec& quad) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const double x_max = table_extent(density, epsilon, quad);
  const std::size_t n = kJumpTableKnots;
  knots_.resize(n);
  cdf_.resize(n);
  const double log_lo = std::log(epsilon);
  const double step = (std::log(x_max) - log_lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    knots_[i] = std::exp(log_lo + step * static_cast<double>(i));
  }
  knots_.front() = epsilon;
  knots_.back() = x_max;

  const Integrand w = [&](double x) { return density(x); };
  cdf_[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double piece = gauss_kronrod21(w, knots_[i - 1], knots_[i]).value;
    if (!(piece >= 0.0) || !std::isfinite(piece)) {
      throw ConvergenceError("jump-size table: density integral is not a "
                             "finite non-negative number",
                             piece, 0.0);
    }
    cdf_[i] = cdf_[i - 1] + piece;
  }
  const double one_sided = cdf_.back();
  if (!(one_sided > 0.0)) {
    throw DomainError("jump-size table: no jump mass above epsilon");
  }
  for (auto& c : cdf_) c /= one_sided;
  cdf_.back() = 1.0;
  total_mass_ = 2.0 * one_sided;
}

double JumpSizeTable::invert(double uniform) const noexcept {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), uniform);
  if (it == cdf_.begin()) return knots_.front();
  if (it == cdf_.end()) return knots_.back();
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  const double f0 = cdf_[i - 1];
  const double f1 = cdf_[i];
  const double w = f1 > f0 ? (uniform - f0) / (f1 - f0) : 0.0;
  return knots_[i - 1] + w * (knots_[i] - knots_[i - 1]);
}

PathEnsemble sample_increments(const LevyExponent& exponent,
                               const JumpSimConfig& config,
                               const QuadratureSpec& quad) {
  config.validate();
  const LevyDensity* density = exponent.density();
  if (density == nullptr) {
    throw DomainError("sampling needs a jump measure (relativistic or "
                      "measure-defined exponent)");
  }
  const auto report = validate_levy_measure(*density, quad);
  if (!report.ok) {
    throw DomainError("invalid Levy measure: " + report.diagnostic);
  }

  const double time_ratio = config.horizon / exponent.tau();
  const JumpSizeTable table(*density, config.epsilon, quad);
  const double rate = table.total_mass() * time_ratio;
  if (rate > kMaxJumpsPerPath) {
    std::ostringstream msg;
    msg << "expected " << rate << " jumps per path exceeds the budget of "
        << kMaxJumpsPerPath << "; increase epsilon";
    throw BudgetError(msg.str());
  }

  PathEnsemble out;
  out.config = config;
  out.jump_rate = rate;
  out.compensation_variance =
      config.gaussian_compensation
          ? small_jump_variance(*density, config.epsilon, quad) * time_ratio
          : 0.0;
  const double beta = exponent.beta();
  const double gauss_sd =
      std::sqrt(out.compensation_variance + beta * beta * time_ratio);

  const std::size_t n = config.n_paths;
  out.increments.assign(n, 0.0);
  std::vector<std::uint64_t> counts(n, 0);

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t path = begin; path < end; ++path) {
      std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(path)));
      std::poisson_distribution<std::uint64_t> poisson(rate);
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      const std::uint64_t jumps = rate > 0.0 ? poisson(rng) : 0;
      double x = 0.0;
      for (std::uint64_t j = 0; j < jumps; ++j) {
        // One variate carries both the sign (top half) and the size.
        const double v = 2.0 * uniform(rng);
        const double size = table.invert(v < 1.0 ? v : v - 1.0);
        x += v < 1.0 ? size : -size;
      }
      if (gauss_sd > 0.0) {
        std::normal_distribution<double> normal(0.0, gauss_sd);
        x += normal(rng);
      }
      out.increments[path] = x;
      counts[path] = jumps;
    }
  };

  unsigned workers = config.threads != 0 ? config.threads
                                         : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    run_range(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
  }

  double total = 0.0;
  for (auto c : counts) {
    total += static_cast<double>(c);
    out.jump_counts.max = std::max(out.jump_counts.max, c);
  }
  out.jump_counts.mean = total / static_cast<double>(n);
  return out;
}

EmpiricalCf empirical_cf(const PathEnsemble& ensemble,
                         std::span<const double> u_values) {
  const auto& xs = ensemble.increments;
  if (xs.empty()) throw DomainError("empirical CF of an empty ensemble");
  const double n = static_cast<double>(xs.size());
  EmpiricalCf out;
  for (double u : u_values) {
    double sc = 0.0, ss = 0.0, sc2 = 0.0, ss2 = 0.0;
    for (double x : xs) {
      const double c = std::cos(u * x);
      const double s = std::sin(u * x);
      sc += c;
      ss += s;
      sc2 += c * c;
      ss2 += s * s;
    }
    const double mc = sc / n;
    const double ms = ss / n;
    const double denom = xs.size() > 1 ? n - 1.0 : 1.0;
    const double vc = std::max(0.0, (sc2 - n * mc * mc) / denom);
    const double vs = std::max(0.0, (ss2 - n * ms * ms) / denom);
    out.value.emplace_back(mc, ms);
    out.stderr_real.push_back(std::sqrt(vc / n));
    out.stderr_imag.push_back(std::sqrt(vs / n));
  }
  return out;
}

MomentEstimate sample_moments(const PathEnsemble& ensemble) {
  const auto& xs = ensemble.increments;
  if (xs.size() < 2) throw DomainError("moments need at least two paths");
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d2 = (x - mean) * (x - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  MomentEstimate out;
  out.mean = mean;
  out.variance = m2 / (n - 1.0);
  out.stderr_mean = std::sqrt(out.variance / n);
  const double central4 = m4 / n;
  const double central2 = m2 / n;
  out.stderr_variance =
      std::sqrt(std::max(0.0, central4 - central2 * central2) / n);
  return out;
}

}  // namespace levymass
