#pragma once

#include <stdexcept>
#include <string>

namespace mulcalc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a precondition: a point outside the model domain, a
/// degenerate interval, an invalid family parameter or bound.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite value or a quadrature did not reach
/// its tolerance within budget.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what, double best_estimate = 0.0,
                            double error_bound = 0.0)
      : Error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// A closed-form value disagrees with its quadrature cross-check.
class ConsistencyError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace mulcalc
