#pragma once

#include <stdexcept>
#include <string>

namespace levymass {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (m <= 0, x = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Array or grid shapes do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A work budget (jump rate, panel count for table construction) was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A closed form degenerates (vanishing leading coefficient, 1 - A = 0).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// The grid cannot represent the requested object without aliasing.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, double diagnostic)
      : Error(what), diagnostic_(diagnostic) {}
  double diagnostic() const noexcept { return diagnostic_; }

 private:
  double diagnostic_;
};

/// Numerical iteration or quadrature did not reach its tolerance.
/// Carries whatever estimate was available when the budget ran out.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double partial_estimate,
                   double error_estimate)
      : Error(what),
        partial_estimate_(partial_estimate),
        error_estimate_(error_estimate) {}
  double partial_estimate() const noexcept { return partial_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_estimate_;
  double error_estimate_;
};

}  // namespace levymass
