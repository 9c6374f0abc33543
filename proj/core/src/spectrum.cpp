#include "levymass/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levymass/errors.hpp"

namespace levymass {

namespace {

constexpr double kEqualRoots = 1e-9;

bool same_root(double a, double b) {
  return std::abs(a - b) <= kEqualRoots * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

double polish(const CutoffPolynomial& c, double x) {
  // One Newton step on h(x) = x - 1 - f(x); skipped where h' vanishes.
  const double h = x - 1.0 - c(x);
  const double dh = 1.0 - c.derivative(x);
  if (std::abs(dh) < 1e-8 * c.scale(x)) return x;
  const double next = x - h / dh;
  const double h_next = next - 1.0 - c(next);
  return std::abs(h_next) <= std::abs(h) ? next : x;
}

double bisect(const std::function<double(double)>& h, double a, double b,
              double ha) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) break;
    const double hm = h(mid);
    if (hm == 0.0) return mid;
    if ((hm < 0.0) == (ha < 0.0)) {
      a = mid;
      ha = hm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

void scan_range(const std::function<double(double)>& h, double lo, double hi,
                int panels, int depth, const RootScanOptions& options,
                std::vector<double>& out) {
  std::vector<double> xs(static_cast<std::size_t>(panels) + 1);
  std::vector<double> hs(xs.size());
  const double width = (hi - lo) / panels;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = i + 1 == xs.size() ? hi : lo + width * static_cast<double>(i);
    hs[i] = h(xs[i]);
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (hs[i] == 0.0) out.push_back(xs[i]);
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (std::isnan(hs[i]) || std::isnan(hs[i + 1])) continue;
    if ((hs[i] < 0.0 && hs[i + 1] > 0.0) || (hs[i] > 0.0 && hs[i + 1] < 0.0)) {
      out.push_back(bisect(h, xs[i], xs[i + 1], hs[i]));
    }
  }
  if (depth <= 0) return;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double l = hs[i - 1], c = hs[i], r = hs[i + 1];
    if (std::isnan(l) || std::isnan(c) || std::isnan(r) || c == 0.0) continue;
    const bool same_sign = (l > 0.0) == (c > 0.0) && (c > 0.0) == (r > 0.0);
    if (same_sign && std::abs(c) <= std::abs(l) && std::abs(c) <= std::abs(r)) {
      scan_range(h, xs[i - 1], xs[i + 1], options.refine_panels, depth - 1,
                 options, out);
    }
  }
}

}  // namespace

CutoffPolynomial CutoffPolynomial::constrained(double lambda1, double lambda2,
                                               double lambda3) {
  // Same association as the Horner evaluation at x = 1, so f(1) == 0 exactly.
  return {-(lambda1 + (lambda2 + lambda3)), lambda1, lambda2, lambda3};
}

CutoffPolynomial CutoffPolynomial::from_coefficients(double lambda0,
                                                     double lambda1,
                                                     double lambda2,
                                                     double lambda3) {
  CutoffPolynomial c{lambda0, lambda1, lambda2, lambda3};
  const double scale = std::abs(lambda0) + std::abs(lambda1) +
                       std::abs(lambda2) + std::abs(lambda3);
  if (std::abs(c(1.0)) > 1e-12 * std::max(1.0, scale)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "cutoff violates f(1) = 0 (f(1) = " << c(1.0) << ")";
    throw DomainError(msg.str());
  }
  return c;
}

double CutoffPolynomial::scale(double x) const noexcept {
  const double ax = std::abs(x);
  return 1.0 + ax + std::abs(lambda0) + ax * (std::abs(lambda1) +
         ax * (std::abs(lambda2) + ax * std::abs(lambda3)));
}

int CutoffPolynomial::degree() const noexcept {
  if (lambda3 != 0.0) return 3;
  if (lambda2 != 0.0) return 2;
  if (lambda1 != 0.0) return 1;
  return 0;
}

std::vector<double> RootSet::accepted_values() const {
  std::vector<double> out;
  for (const auto& r : roots) {
    if (r.accepted()) out.push_back(r.value);
  }
  return out;
}

CutoffPolynomial cutoff_from_roots(double x_plus, double x_minus,
                                   double lambda3) {
  if (lambda3 == 0.0) throw DegenerateError("lambda3 must be nonzero");
  if (!(x_plus > 0.0) || !(x_minus > 0.0)) {
    throw DomainError("mass roots must be positive");
  }
  const double sum = x_plus + x_minus;
  const double product = x_plus * x_minus;
  const double lambda2 = -lambda3 * (1.0 + sum);
  const double lambda1 = 1.0 + lambda3 * (sum + product);
  return CutoffPolynomial::constrained(lambda1, lambda2, lambda3);
}

RootSet roots_from_cutoff(const CutoffPolynomial& c) {
  if (c.lambda3 == 0.0) throw DegenerateError("lambda3 must be nonzero");
  const double l1 = c.lambda1, l2 = c.lambda2, l3 = c.lambda3;

  RootSet set;
  set.discriminant =
      (l2 - l3) * (l2 - l3) - 4.0 * l1 * l3 - 4.0 * l3 * l3 + 4.0 * l3;

  // After removing the factor (x - 1): l3 x^2 + (l2 + l3) x + (l1 + l2 + l3 - 1).
  const double a = l3;
  const double b = l2 + l3;
  const double cc = l1 + l2 + l3 - 1.0;

  set.roots[0] = Root{1.0, 0.0, RootStatus::RealPositive, 1, "1"};
  Root plus{0.0, 0.0, RootStatus::RealPositive, 1, "x+"};
  Root minus{0.0, 0.0, RootStatus::RealPositive, 1, "x-"};

  if (set.discriminant < 0.0) {
    plus.value = minus.value = -b / (2.0 * a);
    plus.imag = std::sqrt(-set.discriminant) / (2.0 * std::abs(a));
    minus.imag = -plus.imag;
    plus.status = minus.status = RootStatus::Complex;
  } else {
    // Cancellation-free pair; labels follow x+- = (-b +- sqrt(D)) / (2 a).
    const double sq = std::sqrt(set.discriminant);
    const double q = -0.5 * (b + std::copysign(sq, b));
    double from_q = 0.0;
    double from_cq = 0.0;
    if (q != 0.0) {
      from_q = q / a;
      from_cq = cc / q;
    }
    // q/a = (-b - sign(b) sq)/(2a): equals x- when b >= 0, x+ otherwise.
    const bool q_is_minus = b >= 0.0;
    plus.value = polish(c, q_is_minus ? from_cq : from_q);
    minus.value = polish(c, q_is_minus ? from_q : from_cq);
    for (Root* r : {&plus, &minus}) {
      if (!(r->value > 0.0)) r->status = RootStatus::NonPositive;
    }
  }
  set.roots[1] = plus;
  set.roots[2] = minus;

  // Multiplicities among real roots.
  for (std::size_t i = 0; i < 3; ++i) {
    if (set.roots[i].status == RootStatus::Complex) continue;
    int count = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (set.roots[j].status != RootStatus::Complex &&
          same_root(set.roots[i].value, set.roots[j].value)) {
        ++count;
      }
    }
    set.roots[i].multiplicity = count;
    if (count > 1) set.degenerate = true;
  }
  return set;
}

MassSpectrum mass_spectrum(double m, const CutoffPolynomial& cutoff) {
  if (!(m > 0.0)) throw DomainError("base mass must be positive");
  const RootSet roots = roots_from_cutoff(cutoff);
  MassSpectrum out;
  out.m_base = m;
  out.degenerate = roots.degenerate;
  for (const auto& r : roots.roots) {
    if (r.accepted()) {
      out.masses.push_back({m * std::sqrt(r.value), r.value, r.label});
    } else {
      out.rejected.push_back(r);
    }
  }
  std::stable_sort(out.masses.begin(), out.masses.end(),
                   [](const MassLevel& a, const MassLevel& b) { return a.mass < b.mass; });
  return out;
}

double modified_dispersion(double p, double m, const CutoffPolynomial& cutoff,
                           double branch_x, bool kinetic) {
  if (!(m > 0.0)) throw DomainError("base mass must be positive");
  if (!(branch_x > 0.0)) {
    throw DomainError("branch root must be positive to define a mass");
  }
  const double residual = std::abs(cutoff.g(branch_x) - 1.0);
  if (residual > 1e-8 * cutoff.scale(branch_x)) {
    throw DomainError("branch_x does not solve g(x) = 1 for this cutoff");
  }
  const double rest = m * std::sqrt(branch_x);
  const double energy = std::sqrt(rest * rest + p * p);
  if (!kinetic) return energy;
  return p * p / (energy + rest);
}

std::vector<double> scan_roots(const std::function<double(double)>& h,
                               double lo, double hi,
                               const RootScanOptions& options) {
  if (!(lo < hi)) throw DomainError("root scan needs lo < hi");
  if (options.panels < 1 || options.refine_panels < 2) {
    throw DomainError("root scan needs at least one panel");
  }
  std::vector<double> roots;
  scan_range(h, lo, hi, options.panels, options.refine_depth, options, roots);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) {
                            return std::abs(a - b) <=
                                   4.0 * std::numeric_limits<double>::epsilon() *
                                       std::max(1.0, std::abs(a));
                          }),
              roots.end());
  return roots;
}

std::vector<double> g_solve(const std::function<double(double)>& f, double lo,
                            double hi, double tolerance,
                            const RootScanOptions& options) {
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  const auto h = [&](double x) { return x - f(x) - 1.0; };
  std::vector<double> out;
  for (double x : scan_roots(h, lo, hi, options)) {
    if (std::abs(h(x)) <= tolerance) out.push_back(x);
  }
  return out;
}

}  // namespace levymass
