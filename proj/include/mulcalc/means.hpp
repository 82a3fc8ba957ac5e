#pragma once

#include "mulcalc/bounds.hpp"

namespace mulcalc {

/// Two positive reals 0 < a < b.
class MeanPair {
 public:
  MeanPair(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

 private:
  double a_;
  double b_;
};

/// A(a, b) = (a + b) / 2.
double arithmetic(const MeanPair& mp);
/// H(a, b) = 2ab / (a + b).
double harmonic(const MeanPair& mp);
/// L(a, b) = (b - a) / (ln b - ln a).
double logarithmic(const MeanPair& mp);
/// L_p(a, b) = ((b^{p+1} - a^{p+1}) / ((p+1)(b-a)))^{1/p}, p not in {-1, 0}.
double p_logarithmic(const MeanPair& mp, double p);
/// L_p(a, b)^p without the round trip through the 1/p root.
double p_logarithmic_pow(const MeanPair& mp, double p);

/// e^{A^p - L_p^p} <= (e^{a^{p-1} + b^{p-1}})^{p(b-a)/8}, p >= 2.
/// lhs_log is the signed exponent A^p - L_p^p as written.
BoundReport prop41_check(const MeanPair& mp, double p);

enum class Prop42Variant { paper, corrected };

/// e^{1/H - 1/L} <= e^{-(b-a)/(4b^2)} (paper) or e^{(b-a)/(4a^2)} (corrected).
BoundReport prop42_check(const MeanPair& mp, Prop42Variant variant);

}  // namespace mulcalc
