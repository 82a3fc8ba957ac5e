#pragma once

#include <cmath>
#include <string>

#include "mulcalc/errors.hpp"

namespace mulcalc {

/// A strictly positive real stored as its natural logarithm.
///
/// Products and quotients of represented values are sums and differences of
/// logs, so nothing overflows until the value is exponentiated for display.
class LogValue {
 public:
  static LogValue from_log(double log) {
    if (!std::isfinite(log)) {
      throw NumericalFailure("LogValue: non-finite logarithm");
    }
    return LogValue(log);
  }

  static LogValue from_value(double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw DomainError("LogValue: value must be finite and positive, got " +
                        std::to_string(value));
    }
    return LogValue(std::log(value));
  }

  static LogValue one() { return LogValue(0.0); }

  double log() const noexcept { return log_; }
  double value() const { return std::exp(log_); }

  LogValue pow(double p) const { return from_log(p * log_); }

  friend LogValue operator*(LogValue x, LogValue y) { return from_log(x.log_ + y.log_); }
  friend LogValue operator/(LogValue x, LogValue y) { return from_log(x.log_ - y.log_); }
  friend bool operator==(LogValue x, LogValue y) noexcept { return x.log_ == y.log_; }
  friend bool operator<(LogValue x, LogValue y) noexcept { return x.log_ < y.log_; }
  friend bool operator<=(LogValue x, LogValue y) noexcept { return x.log_ <= y.log_; }

 private:
  explicit LogValue(double log) noexcept : log_(log) {}
  double log_;
};

}  // namespace mulcalc
