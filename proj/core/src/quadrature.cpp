#include "levymass/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levymass/errors.hpp"

namespace levymass {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

struct WorstFirst {
  bool operator()(const Panel& lhs, const Panel& rhs) const {
    return lhs.error < rhs.error;
  }
};

// Compensated sum in left-endpoint order, so the result does not depend on
// the order in which panels were split.
double ordered_sum(std::vector<Panel>& panels, double Panel::*field) {
  std::sort(panels.begin(), panels.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  double sum = 0.0;
  double comp = 0.0;
  for (const auto& p : panels) {
    const double y = p.*field - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_panels < 1) {
    throw DomainError("quadrature panel budget must be at least 1");
  }
}

QuadResult gauss_kronrod21(const Integrand& f, double a, double b) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  // The 10-point Gauss nodes are the odd-indexed Kronrod abscissae.
  const double f0 = f(mid);
  double kronrod = f0 * wk[0];
  double gauss = 0.0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += pair * wk[i];
    if (i % 2 == 1) gauss += pair * wg[i / 2];
  }
  QuadResult r;
  r.value = kronrod * half;
  r.abs_error = std::max(std::abs((kronrod - gauss) * half),
                         50.0 * std::numeric_limits<double>::epsilon() *
                             std::abs(r.value));
  r.panels = 1;
  return r;
}

QuadResult integrate_breaks(const Integrand& f, std::vector<double> breaks,
                            const QuadratureSpec& spec) {
  spec.validate();
  if (breaks.size() < 2) throw DomainError("integration needs two breakpoints");
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::priority_queue<Panel, std::vector<Panel>, WorstFirst> queue;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const auto r = gauss_kronrod21(f, breaks[i], breaks[i + 1]);
    queue.push({breaks[i], breaks[i + 1], r.value, r.abs_error});
    total += r.value;
    total_err += r.abs_error;
  }

  std::vector<Panel> frozen;
  auto target = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };

  while (total_err > target() && !queue.empty()) {
    if (static_cast<int>(queue.size() + frozen.size()) >= spec.max_panels) {
      std::ostringstream msg;
      msg << "adaptive quadrature exhausted " << spec.max_panels
          << " panels (estimate " << total << ", error " << total_err << ")";
      throw ConvergenceError(msg.str(), total, total_err);
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel is at the resolution of double; its error cannot shrink.
      frozen.push_back(worst);
      continue;
    }
    const auto left = gauss_kronrod21(f, worst.a, mid);
    const auto right = gauss_kronrod21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.abs_error + right.abs_error - worst.error;
    queue.push({worst.a, mid, left.value, left.abs_error});
    queue.push({mid, worst.b, right.value, right.abs_error});
  }

  std::vector<Panel> all = std::move(frozen);
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  QuadResult r;
  r.panels = static_cast<int>(all.size());
  r.abs_error = ordered_sum(all, &Panel::error);
  r.value = ordered_sum(all, &Panel::value);
  if (!std::isfinite(r.value)) {
    throw ConvergenceError("integrand produced a non-finite value", r.value,
                           r.abs_error);
  }
  if (r.abs_error > 10.0 * std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value))) {
    throw ConvergenceError("quadrature stalled at round-off level", r.value,
                           r.abs_error);
  }
  return r;
}

QuadResult integrate(const Integrand& f, double a, double b,
                     const QuadratureSpec& spec) {
  if (a == b) return {};
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  std::vector<double> breaks{lo, hi};
  for (double s : spec.split_points) {
    if (s > lo && s < hi) breaks.push_back(s);
  }
  auto r = integrate_breaks(f, std::move(breaks), spec);
  r.value *= sign;
  return r;
}

QuadResult integrate_to_infinity(const Integrand& f, double a,
                                 const QuadratureSpec& spec, double tail_scale) {
  const bool exponential = spec.tail_transform == TailTransform::Exponential &&
                           std::isfinite(tail_scale) && tail_scale > 0.0;
  if (exponential) {
    // x = c e^t with c > 0; 60 decay lengths past a leaves < e^-60 behind.
    const double c = a > 0.0 ? a : tail_scale;
    const double shift = a > 0.0 ? 0.0 : a - c;  // only used when a <= 0
    const double t_max = std::log((std::max(a, c) + 60.0 * tail_scale) / c);
    Integrand mapped = [&](double t) {
      const double x = c * std::exp(t);
      return f(x + shift) * x;
    };
    QuadratureSpec inner = spec;
    inner.split_points.clear();
    for (double s : spec.split_points) {
      if (s - shift > c) inner.split_points.push_back(std::log((s - shift) / c));
    }
    return integrate(mapped, 0.0, t_max, inner);
  }
  Integrand mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };
  QuadratureSpec inner = spec;
  inner.split_points.clear();
  for (double s : spec.split_points) {
    if (s > a) inner.split_points.push_back((s - a) / (1.0 + s - a));
  }
  return integrate(mapped, 0.0, 1.0, inner);
}

ShellSum integrate_dyadic(const Integrand& f, double edge,
                          ShellDirection direction, const QuadratureSpec& spec,
                          int max_shells) {
  if (!(edge > 0.0)) throw DomainError("dyadic integration needs edge > 0");
  ShellSum out;
  double previous = 0.0;
  int slow_run = 0;
  double lo = direction == ShellDirection::Inward ? 0.5 * edge : edge;
  double hi = direction == ShellDirection::Inward ? edge : 2.0 * edge;
  for (int k = 0; k < max_shells; ++k) {
    if (!(lo > 0.0) || !std::isfinite(hi)) break;
    const auto shell = integrate(f, lo, hi, spec);
    out.value += shell.value;
    out.abs_error += shell.abs_error;
    out.shells = k + 1;
    const double size = std::abs(shell.value);

    if (k > 0 && previous > 0.0) {
      const double ratio = size / previous;
      slow_run = ratio > 0.99 ? slow_run + 1 : 0;
      if (slow_run >= 8) {
        out.divergent = true;
        return out;
      }
      // Geometric bound on everything not yet summed.
      if (ratio < 0.95) {
        const double remainder = size * ratio / (1.0 - ratio);
        const double target =
            std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
        if (remainder <= target) {
          out.abs_error += remainder;
          out.converged = true;
          return out;
        }
      }
    } else if (k > 0 && size == 0.0 && previous == 0.0) {
      out.converged = true;
      return out;
    }
    previous = size;
    if (direction == ShellDirection::Inward) {
      hi = lo;
      lo *= 0.5;
    } else {
      lo = hi;
      hi *= 2.0;
    }
  }
  return out;
}

}  // namespace levymass
