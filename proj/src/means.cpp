#include "mulcalc/means.hpp"

#include <cmath>
#include <string>

namespace mulcalc {

MeanPair::MeanPair(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(0.0 < a && a < b)) {
    throw DomainError("means require 0 < a < b, got a = " + std::to_string(a) +
                      ", b = " + std::to_string(b));
  }
}

double arithmetic(const MeanPair& mp) { return 0.5 * (mp.a() + mp.b()); }

double harmonic(const MeanPair& mp) { return 2.0 * mp.a() * mp.b() / (mp.a() + mp.b()); }

double logarithmic(const MeanPair& mp) {
  const double gap = mp.b() - mp.a();
  return gap / std::log1p(gap / mp.a());
}

double p_logarithmic_pow(const MeanPair& mp, double p) {
  if (!std::isfinite(p) || p == 0.0 || p == -1.0) {
    throw DomainError("p-logarithmic mean requires finite p outside {-1, 0}");
  }
  // (b^{p+1} - a^{p+1}) / ((p+1)(b-a)) = a^p * expm1((p+1) log1p(d)) / ((p+1) d), d = (b-a)/a
  const double d = (mp.b() - mp.a()) / mp.a();
  return std::pow(mp.a(), p) * std::expm1((p + 1.0) * std::log1p(d)) / ((p + 1.0) * d);
}

double p_logarithmic(const MeanPair& mp, double p) {
  return std::pow(p_logarithmic_pow(mp, p), 1.0 / p);
}

BoundReport prop41_check(const MeanPair& mp, double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) {
    throw DomainError("prop41 requires p >= 2, got " + std::to_string(p));
  }
  const double a = mp.a();
  const double b = mp.b();
  const double lhs = std::pow(arithmetic(mp), p) - p_logarithmic_pow(mp, p);
  const double rhs = p * (b - a) * (std::pow(a, p - 1.0) + std::pow(b, p - 1.0)) / 8.0;
  return make_bound_report("prop41", Mode::strict, lhs, rhs);
}

BoundReport prop42_check(const MeanPair& mp, Prop42Variant variant) {
  const double a = mp.a();
  const double b = mp.b();
  const double lhs = 1.0 / harmonic(mp) - 1.0 / logarithmic(mp);
  // ln f* = -1/t^2 is concave on (0, inf), so f* is never multiplicatively convex here.
  constexpr bool hypothesis_ok = false;
  if (variant == Prop42Variant::paper) {
    return make_bound_report("prop42_paper", Mode::strict, lhs, -(b - a) / (4.0 * b * b),
                             hypothesis_ok);
  }
  return make_bound_report("prop42_corrected", Mode::robust, lhs, (b - a) / (4.0 * a * a),
                           hypothesis_ok);
}

}  // namespace mulcalc
