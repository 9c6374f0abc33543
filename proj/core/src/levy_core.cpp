#include "levymass/levy_core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "levymass/bessel.hpp"
#include "levymass/errors.hpp"

namespace levymass {

namespace {

void require_mass(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("mass must be positive and finite");
  }
}

}  // namespace

LevyDensity relativistic_density(double mass) {
  require_mass(mass);
  LevyDensity d;
  d.evaluate = [mass](double x) { return levy_density_1d(x, mass); };
  d.singularity_order = 2.0;
  d.tail_scale = 1.0 / mass;
  return d;
}

LevyExponent::LevyExponent(Kind kind, double tau)
    : kind_(std::move(kind)), tau_(tau) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
    throw DomainError("time scale tau must be positive");
  }
  if (const auto* r = std::get_if<Relativistic>(&kind_)) {
    jump_density_ = relativistic_density(r->mass);
  }
}

LevyExponent LevyExponent::relativistic(double mass) {
  require_mass(mass);
  return LevyExponent(Relativistic{mass}, 1.0 / mass);
}

LevyExponent LevyExponent::gaussian(double beta, double tau) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw DomainError("diffusion scale beta must be non-negative");
  }
  return LevyExponent(Gaussian{beta}, tau);
}

LevyExponent LevyExponent::measure_defined(double beta, LevyDensity density,
                                           double tau) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw DomainError("diffusion scale beta must be non-negative");
  }
  if (!density.evaluate) throw DomainError("Levy density has no evaluator");
  return LevyExponent(MeasureDefined{beta, std::move(density)}, tau);
}

LevyExponent LevyExponent::from_triplet(double drift, double beta,
                                        LevyDensity density, double tau) {
  if (drift != 0.0) {
    throw DomainError("only symmetric (drift-free) exponents are supported");
  }
  return measure_defined(beta, std::move(density), tau);
}

double LevyExponent::mass() const {
  if (const auto* r = std::get_if<Relativistic>(&kind_)) return r->mass;
  throw DomainError("exponent has no mass parameter");
}

double LevyExponent::beta() const noexcept {
  if (const auto* g = std::get_if<Gaussian>(&kind_)) return g->beta;
  if (const auto* m = std::get_if<MeasureDefined>(&kind_)) return m->beta;
  return 0.0;
}

const LevyDensity* LevyExponent::density() const noexcept {
  if (std::holds_alternative<Relativistic>(kind_)) return &jump_density_;
  if (const auto* m = std::get_if<MeasureDefined>(&kind_)) return &m->density;
  return nullptr;
}

double LevyExponent::eta(double u) const { return eta(u, QuadratureSpec{}); }

double LevyExponent::eta(double u, const QuadratureSpec& quad) const {
  if (const auto* r = std::get_if<Relativistic>(&kind_)) {
    return eta_relativistic(u, r->mass);
  }
  if (const auto* g = std::get_if<Gaussian>(&kind_)) {
    return -0.5 * g->beta * g->beta * u * u;
  }
  return eta_from_measure(u, *this, quad).value;
}

std::string LevyExponent::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* r = std::get_if<Relativistic>(&kind_)) {
    os << "relativistic(m=" << r->mass << ")";
  } else if (const auto* g = std::get_if<Gaussian>(&kind_)) {
    os << "gaussian(beta=" << g->beta << ",tau=" << tau_ << ")";
  } else {
    os << "measure(beta=" << beta() << ",tau=" << tau_ << ")";
  }
  return os.str();
}

double eta_relativistic(double u, double mass) {
  require_mass(mass);
  const double v = (u / mass) * (u / mass);
  // 1 - sqrt(1+v) rewritten to avoid cancellation for small v.
  return -v / (1.0 + std::sqrt(1.0 + v));
}

EtaEstimate eta_from_measure(double u, const LevyExponent& exponent,
                             const QuadratureSpec& quad) {
  quad.validate();
  const double beta = exponent.beta();
  EtaEstimate out;
  out.value = -0.5 * beta * beta * u * u;

  const LevyDensity* density = exponent.density();
  if (density == nullptr || u == 0.0) return out;

  // cos(ux) - 1 = -2 sin^2(ux/2), exact near x = 0 where W is singular.
  const Integrand integrand = [&](double x) {
    if (x == 0.0) return 0.0;
    const double s = std::sin(0.5 * u * x);
    return -2.0 * s * s * (*density)(x);
  };

  const double split = std::isfinite(density->tail_scale)
                           ? density->tail_scale
                           : 1.0;
  const auto body = integrate(integrand, 0.0, split, quad);
  const auto tail =
      integrate_to_infinity(integrand, split, quad, density->tail_scale);
  out.value += 2.0 * (body.value + tail.value);
  out.abs_error = 2.0 * (body.abs_error + tail.abs_error);
  return out;
}

double levy_density_1d(double x, double mass) {
  require_mass(mass);
  if (x == 0.0 || !std::isfinite(x)) {
    throw DomainError("Levy density is singular at x = 0");
  }
  const double ax = std::abs(x);
  return bessel_k(1, mass * ax) / (std::numbers::pi * ax);
}

double levy_density_3d(double r, double mass) {
  require_mass(mass);
  if (!(r > 0.0)) throw DomainError("3D Levy density requires r > 0");
  return mass / (2.0 * std::numbers::pi * std::numbers::pi * r * r) *
         bessel_k(2, mass * r);
}

MeasureReport validate_levy_measure(const LevyDensity& density,
                                    const QuadratureSpec& quad) {
  quad.validate();
  MeasureReport report;
  if (!density.evaluate) {
    report.diagnostic = "density has no evaluator";
    return report;
  }
  const Integrand second_moment = [&](double x) { return x * x * density(x); };
  const Integrand mass = [&](double x) { return density(x); };

  ShellSum small;
  ShellSum tail;
  try {
    small = integrate_dyadic(second_moment, 1.0, ShellDirection::Inward, quad);
    tail = integrate_dyadic(mass, 1.0, ShellDirection::Outward, quad);
  } catch (const ConvergenceError& e) {
    report.diagnostic = std::string("quadrature failed: ") + e.what();
    return report;
  }
  report.small_jump_mass = 2.0 * small.value;
  report.tail_mass = 2.0 * tail.value;

  std::ostringstream diag;
  if (small.divergent) {
    diag << "small-jump integral diverges (shell contributions stopped "
            "decaying after "
         << small.shells << " shells)";
  } else if (!small.converged) {
    diag << "small-jump integral not certified within " << small.shells
         << " shells";
  } else if (tail.divergent) {
    diag << "tail mass diverges (shell contributions stopped decaying after "
         << tail.shells << " shells)";
  } else if (!tail.converged) {
    diag << "tail mass not certified within " << tail.shells << " shells";
  } else {
    report.ok = true;
  }
  report.diagnostic = diag.str();
  return report;
}

double dispersion_energy(double p, double mass) {
  require_mass(mass);
  return p * p / (std::sqrt(mass * mass + p * p) + mass);
}

}  // namespace levymass
