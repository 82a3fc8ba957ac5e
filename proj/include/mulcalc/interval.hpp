#pragma once

#include <cmath>
#include <string>

#include "mulcalc/errors.hpp"

namespace mulcalc {

/// Closed interval [a, b] with a < b strictly.
class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
      throw DomainError("interval requires finite a < b, got [" + std::to_string(a) + ", " +
                        std::to_string(b) + "]");
    }
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double width() const noexcept { return b_ - a_; }
  double midpoint() const noexcept { return 0.5 * (a_ + b_); }

  /// Point on the segment: (1 - s) a + s b, clamped against rounding.
  double lerp(double s) const noexcept {
    const double t = (1.0 - s) * a_ + s * b_;
    return t < a_ ? a_ : (t > b_ ? b_ : t);
  }

  bool contains(double t) const noexcept { return a_ <= t && t <= b_; }
  bool contains(const Interval& other) const noexcept {
    return a_ <= other.a_ && other.b_ <= b_;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

}  // namespace mulcalc
