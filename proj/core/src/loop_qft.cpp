#include "levymass/loop_qft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "levymass/errors.hpp"
#include "levymass/quadrature.hpp"

namespace levymass {

namespace {

constexpr double kPi = std::numbers::pi;

Complex branch_sqrt(double s, BranchPolicy policy) {
  if (s >= 0.0) return {std::sqrt(s), 0.0};
  if (policy == BranchPolicy::Strict) {
    std::ostringstream msg;
    msg << "1 + f = " << s << " < 0: sqrt(1 + f) needs an explicit branch "
        << "policy";
    throw DomainError(msg.str());
  }
  return {0.0, std::sqrt(-s)};
}

// 1 / (a p-slash - b) = (a p-slash + b) / (a^2 p^2 - b^2 + i eps).
PropagatorValue rationalised(Complex a, Complex b, double p2, double epsilon) {
  const Complex denom = a * a * p2 - b * b + Complex(0.0, epsilon);
  if (denom == Complex{0.0, 0.0}) {
    throw DegenerateError("propagator evaluated on its pole");
  }
  return {a / denom, b / denom};
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive");
  }
}

}  // namespace

const char* const kSelfEnergyNormalization =
    "C = i * 4 pi g^2 * int d^4k_E N(k) / ((k_E^2 + M^2) (p - k)_E^2); "
    "d^4k_E = k^3 dk sin^2(t) dt dOmega_2 with no (2 pi)^-4; Wick rotation "
    "k0 = i k4, p^2 = -p_E^2, f evaluated at -k_E^2/m^2; "
    "A from the p.k projection of N = -2 k-slash, B from N = 4 M";

SlashPair operator+(const SlashPair& x, const SlashPair& y) {
  return {x.vector_coeff + y.vector_coeff, x.scalar_part + y.scalar_part};
}

SlashPair operator-(const SlashPair& x, const SlashPair& y) {
  return {x.vector_coeff - y.vector_coeff, x.scalar_part - y.scalar_part};
}

SlashPair multiply(const SlashPair& x, const SlashPair& y, double p2) {
  return {x.vector_coeff * y.scalar_part + x.scalar_part * y.vector_coeff,
          x.vector_coeff * y.vector_coeff * p2 + x.scalar_part * y.scalar_part};
}

SlashPair inverse(const SlashPair& x, double p2) {
  const Complex norm =
      x.vector_coeff * x.vector_coeff * p2 - x.scalar_part * x.scalar_part;
  if (norm == Complex{0.0, 0.0}) {
    throw DegenerateError("slash pair is not invertible at this p^2");
  }
  return {x.vector_coeff / norm, -x.scalar_part / norm};
}

double distance(const SlashPair& x, const SlashPair& y) {
  return std::max(std::abs(x.vector_coeff - y.vector_coeff),
                  std::abs(x.scalar_part - y.scalar_part));
}

Complex running_mass(double p2, double m, const CutoffPolynomial& cutoff,
                     BranchPolicy policy) {
  require_positive(m, "mass");
  return m * branch_sqrt(1.0 + cutoff(p2 / (m * m)), policy);
}

Complex kg_propagator(double p2, double m, const CutoffPolynomial& cutoff,
                      double epsilon) {
  require_positive(m, "mass");
  require_positive(epsilon, "i-epsilon");
  const double denom = p2 - m * m * (1.0 + cutoff(p2 / (m * m)));
  return 1.0 / Complex(denom, epsilon);
}

PropagatorValue dirac_propagator(double p2, double m,
                                 const CutoffPolynomial& cutoff, double epsilon,
                                 BranchPolicy policy) {
  require_positive(epsilon, "i-epsilon");
  return rationalised(1.0, running_mass(p2, m, cutoff, policy), p2, epsilon);
}

PowerCount superficial_degree(int degree_f) {
  if (degree_f < 0) throw DomainError("cutoff degree must be non-negative");
  PowerCount pc;
  pc.degree_f = degree_f;
  // M(k^2) ~ k^d (constant for d = 0); k^2 - M^2 ~ k^(2 max(1, d)); the
  // exchanged boson adds k^-2 and the measure k^3.
  const int propagator = 2 * std::max(1, degree_f);
  pc.exponent_B = 3 + degree_f - propagator - 2;
  pc.exponent_A = 3 + 1 - propagator - 2;
  const bool a_ok = pc.exponent_A < -1;
  const bool b_ok = pc.exponent_B < -1;
  pc.convergent = a_ok && b_ok;
  if (!a_ok && !b_ok) {
    pc.failing = "A and B";
  } else if (!a_ok) {
    pc.failing = "A";
  } else if (!b_ok) {
    pc.failing = "B";
  }
  return pc;
}

double polar_average(double p, double k, bool weighted_by_cos, double rel_tol) {
  const double b = 2.0 * p * k;
  const Integrand f = [&](double t) {
    const double s = std::sin(t);
    const double c = std::cos(t);
    // p^2 + k^2 - 2 p k cos t, rewritten to stay accurate near t = 0, p = k.
    const double one_minus_cos = 2.0 * std::sin(0.5 * t) * std::sin(0.5 * t);
    const double denom = (p - k) * (p - k) + b * one_minus_cos;
    return s * s * (weighted_by_cos ? c : 1.0) / denom;
  };
  QuadratureSpec spec;
  spec.rel_tol = rel_tol;
  spec.abs_tol = 1e-3 * rel_tol * kPi / (2.0 * std::max(p * p, k * k));
  spec.max_panels = 2000;
  return integrate(f, 0.0, kPi, spec).value;
}

SelfEnergy self_energy_estimate(double p2, double m,
                                const CutoffPolynomial& cutoff,
                                double coupling,
                                const SelfEnergyScheme& scheme) {
  require_positive(m, "mass");
  require_positive(scheme.cutoff_radius, "cutoff radius");
  if (!(p2 < 0.0)) {
    throw DomainError("self-energy is evaluated at spacelike p^2 < 0 "
                      "(Euclidean p_E^2 = -p^2)");
  }
  SelfEnergy out;
  out.coupling = coupling;
  out.p2 = p2;
  out.scheme = scheme;
  out.normalization = kSelfEnergyNormalization;
  if (coupling == 0.0) return out;

  const double pe = std::sqrt(-p2);
  const double lambda = scheme.cutoff_radius;
  const double k_max = scheme.doubling_check ? 2.0 * lambda : lambda;

  auto m2s = [&](double k) { return m * m * (1.0 + cutoff(-k * k / (m * m))); };

  // The Euclidean propagator k^2 + M^2 must keep its sign on the path.
  {
    const int samples = 4096;
    double previous = m2s(0.0);
    for (int i = 1; i <= samples; ++i) {
      const double k = k_max * i / samples;
      const double d = k * k + m2s(k);
      if (d == 0.0 || (d > 0.0) != (previous > 0.0)) {
        std::ostringstream msg;
        msg << "Euclidean propagator k^2 + M^2 vanishes near k = " << k;
        throw DomainError(msg.str());
      }
      previous = d;
    }
  }
  // Surface branch violations up front rather than from inside quadrature.
  for (int i = 0; i <= 64; ++i) {
    const double k = k_max * i / 64.0;
    (void)branch_sqrt(m2s(k) / (m * m), scheme.branch);
  }

  std::unordered_map<double, double> cache_b, cache_a;
  auto polar = [&](double k, bool weighted) {
    auto& cache = weighted ? cache_a : cache_b;
    if (auto it = cache.find(k); it != cache.end()) return it->second;
    const double v = polar_average(pe, k, weighted);
    cache.emplace(k, v);
    return v;
  };

  // Radial integrands (without the overall i 4 pi g^2 factor); S^2 gives 4 pi.
  auto b_integrand = [&](double k) -> Complex {
    const double s = m2s(k) / (m * m);
    const Complex mass = m * branch_sqrt(s, scheme.branch);
    return 4.0 * kPi * k * k * k * 4.0 * mass / (k * k + m * m * s) *
           polar(k, false);
  };
  auto a_integrand = [&](double k) -> Complex {
    const double s = m2s(k) / (m * m);
    return 4.0 * kPi * k * k * k * (-2.0) / (k * k + m * m * s) * (k / pe) *
           polar(k, true);
  };

  QuadratureSpec spec;
  spec.rel_tol = scheme.rel_tol;
  spec.abs_tol = scheme.abs_tol;
  spec.max_panels = scheme.max_panels;
  std::vector<double> breaks{0.0};
  for (double s = pe; s < lambda; s *= 2.0) breaks.push_back(s);
  for (double s = m; s < lambda; s *= 2.0) breaks.push_back(s);
  breaks.push_back(lambda);

  auto integrate_complex = [&](auto&& integrand, std::vector<double> br) {
    const Integrand re = [&](double k) { return integrand(k).real(); };
    const Integrand im = [&](double k) { return integrand(k).imag(); };
    return Complex(integrate_breaks(re, br, spec).value,
                   integrate_breaks(im, br, spec).value);
  };

  const Complex overall = Complex(0.0, 1.0) * 4.0 * kPi * coupling * coupling;
  const Complex b_inner = integrate_complex(b_integrand, breaks);
  const Complex a_inner = integrate_complex(a_integrand, breaks);
  out.B_tilde = overall * b_inner;
  out.A_tilde = overall * a_inner;

  if (scheme.doubling_check) {
    std::vector<double> outer{lambda, 1.5 * lambda, 2.0 * lambda};
    out.B_tilde_doubled = out.B_tilde + overall * integrate_complex(b_integrand, outer);
    out.A_tilde_doubled = out.A_tilde + overall * integrate_complex(a_integrand, outer);
    auto rel = [](Complex big, Complex small) {
      const double base = std::abs(small);
      const double diff = std::abs(big - small);
      return base > 0.0 ? diff / base : (diff > 0.0 ? INFINITY : 0.0);
    };
    out.stability_B = rel(out.B_tilde_doubled, out.B_tilde);
    out.stability_A = rel(out.A_tilde_doubled, out.A_tilde);
  }
  return out;
}

PropagatorValue resummed_propagator(double p2, double m,
                                    const CutoffPolynomial& cutoff,
                                    Complex A_tilde, Complex B_tilde,
                                    double epsilon, BranchPolicy policy) {
  const Complex one_minus_a = 1.0 - A_tilde;
  if (one_minus_a == Complex{0.0, 0.0}) {
    throw DegenerateError("resummed propagator degenerates at A = 1");
  }
  if (epsilon < 0.0) throw DomainError("i-epsilon must be non-negative");
  return rationalised(one_minus_a,
                      running_mass(p2, m, cutoff, policy) + B_tilde, p2, epsilon);
}

PropagatorValue resummed_propagator(double p2, double m,
                                    const CutoffPolynomial& cutoff,
                                    const SelfEnergy& self_energy,
                                    double epsilon, BranchPolicy policy) {
  return resummed_propagator(p2, m, cutoff, self_energy.A_tilde,
                             self_energy.B_tilde, epsilon, policy);
}

double pole_function(double x, double m, const CutoffPolynomial& cutoff,
                     double A_tilde, double B_tilde) {
  const double one_minus_a = 1.0 - A_tilde;
  const double root = m * std::sqrt(std::max(0.0, 1.0 + cutoff(x))) + B_tilde;
  return one_minus_a * one_minus_a * x * m * m - root * root;
}

std::vector<Pole> pole_search(double m, const CutoffPolynomial& cutoff,
                              double A_tilde, double B_tilde, double lo,
                              double hi, const RootScanOptions& options) {
  require_positive(m, "mass");
  if (A_tilde == 1.0) throw DegenerateError("pole equation degenerates at A = 1");
  if (!(lo < hi)) throw DomainError("pole search needs lo < hi");
  const double m2 = m * m;
  const auto h = [&](double x) {
    return pole_function(x, m, cutoff, A_tilde, B_tilde);
  };
  std::vector<Pole> poles;
  for (double x : scan_roots(h, lo / m2, hi / m2, options)) {
    Pole pole;
    pole.x = x;
    pole.p2 = x * m2;
    const double step = 1e-6 * std::max(1.0, std::abs(x));
    const double slope = h(x + step) - h(x - step);
    pole.slope_sign = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);
    pole.branch_ok = 1.0 + cutoff(x) >= 0.0;
    poles.push_back(pole);
  }
  return poles;
}

}  // namespace levymass
