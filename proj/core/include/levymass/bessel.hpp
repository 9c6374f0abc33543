#pragma once

namespace levymass {

struct BesselValue {
  double value = 0.0;
  /// Set when the true value is below the smallest normal double and 0 was returned.
  bool underflow = false;
};

/// Modified Bessel function of the second kind K_order(z) for order in {0, 1, 2}.
///
/// Power series below z = 2, Steed's continued fraction above; K_2 comes from
/// the upward recurrence K_2 = K_0 + 2 K_1 / z. Relative accuracy is about
/// 1e-14 across the range. Throws DomainError for z <= 0 or an unsupported order.
BesselValue bessel_k_checked(int order, double z);

/// Convenience wrapper returning only the value.
double bessel_k(int order, double z);

/// e^z K_order(z), which stays representable where K itself underflows.
double bessel_k_scaled(int order, double z);

}  // namespace levymass
