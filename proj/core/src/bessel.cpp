#include "levymass/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "levymass/errors.hpp"

namespace levymass {

namespace {

constexpr double kSeriesLimit = 2.0;
constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-17;

struct KPair {
  double k0;
  double k1;
};

// Small-argument series; I_0, I_1 and the digamma-weighted sums are
// accumulated in the same loop.
KPair series(double z) {
  const double half = 0.5 * z;
  const double q = half * half;
  const double log_half = std::log(half);

  double term = 1.0;  // (z^2/4)^k / (k!)^2
  double harmonic = 0.0;
  double i0 = 0.0;
  double k0_sum = 0.0;

  double term1 = 1.0;  // (z^2/4)^k / (k! (k+1)!)
  double psi_k1 = -std::numbers::egamma;       // psi(k+1)
  double psi_k2 = 1.0 - std::numbers::egamma;  // psi(k+2)
  double i1_sum = 0.0;
  double k1_sum = 0.0;

  for (int k = 0; k < kMaxIterations; ++k) {
    if (k > 0) {
      term *= q / (double(k) * double(k));
      harmonic += 1.0 / k;
      term1 *= q / (double(k) * double(k + 1));
      psi_k1 += 1.0 / k;
      psi_k2 += 1.0 / (k + 1);
    }
    i0 += term;
    k0_sum += term * harmonic;
    i1_sum += term1;
    k1_sum += term1 * (psi_k1 + psi_k2);
    if (term < kEps * i0 && term1 < kEps * i1_sum) break;
  }
  const double i1 = half * i1_sum;
  KPair r;
  r.k0 = -(log_half + std::numbers::egamma) * i0 + k0_sum;
  r.k1 = 1.0 / z + log_half * i1 - 0.5 * half * k1_sum;
  return r;
}

// Steed's method for CF2 with mu = 0 (Temme's normalisation sum). Returns
// e^z K_0(z) and e^z K_1(z).
KPair continued_fraction_scaled(double z) {
  const double a1 = 0.25;
  double b = 2.0 * (1.0 + z);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < kMaxIterations; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  KPair r;
  r.k0 = std::sqrt(std::numbers::pi / (2.0 * z)) / s;
  r.k1 = r.k0 * (z + 0.5 - h) / z;
  return r;
}

double select(int order, const KPair& k, double z) {
  switch (order) {
    case 0:
      return k.k0;
    case 1:
      return k.k1;
    default:
      return k.k0 + 2.0 * k.k1 / z;
  }
}

void check(int order, double z) {
  if (order < 0 || order > 2) {
    throw DomainError("bessel_k supports orders 0, 1 and 2");
  }
  if (!(z > 0.0)) {
    throw DomainError("bessel_k requires z > 0");
  }
}

}  // namespace

double bessel_k_scaled(int order, double z) {
  check(order, z);
  if (z <= kSeriesLimit) return select(order, series(z), z) * std::exp(z);
  return select(order, continued_fraction_scaled(z), z);
}

BesselValue bessel_k_checked(int order, double z) {
  check(order, z);
  if (z <= kSeriesLimit) {
    return {select(order, series(z), z), false};
  }
  const double scaled = select(order, continued_fraction_scaled(z), z);
  const double log_value = std::log(scaled) - z;
  if (log_value < std::log(std::numeric_limits<double>::min())) {
    return {0.0, true};
  }
  return {scaled * std::exp(-z), false};
}

double bessel_k(int order, double z) { return bessel_k_checked(order, z).value; }

}  // namespace levymass
