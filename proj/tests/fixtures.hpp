#pragma once

#include <cmath>
#include <vector>

#include "mulcalc/functions.hpp"
#include "mulcalc/quadrature.hpp"
#include "mulcalc/rng.hpp"

namespace fixtures {

inline mulcalc::FunctionModel family(mulcalc::FamilyKind kind, std::vector<double> params,
                                     mulcalc::Interval dom) {
  return mulcalc::make_model(mulcalc::FamilySpec{kind, std::move(params), dom});
}

inline mulcalc::FunctionModel exp_t2() {
  return family(mulcalc::FamilyKind::exp_power, {2.0}, mulcalc::Interval(0.0, 1.0));
}

// Every analytic family on one domain that suits all of them.
inline std::vector<mulcalc::FunctionModel> builtins(mulcalc::Interval dom = {0.5, 1.5}) {
  using mulcalc::FamilyKind;
  return {
      family(FamilyKind::constant, {3.0}, dom),
      family(FamilyKind::exp_affine, {1.5, -0.3}, dom),
      family(FamilyKind::exp_power, {2.0}, dom),
      family(FamilyKind::exp_power, {2.5}, dom),
      family(FamilyKind::exp_power, {3.0}, dom),
      family(FamilyKind::exp_recip, {}, dom),
      family(FamilyKind::exp_poly, {0.1, -1.0, 0.5, 0.2}, dom),
  };
}

// Random subinterval of [lo, hi] no narrower than min_width.
inline mulcalc::Interval random_interval(mulcalc::Rng& rng, double lo, double hi,
                                         double min_width = 0.05) {
  for (;;) {
    double a = rng.uniform(lo, hi);
    double b = rng.uniform(lo, hi);
    if (a > b) std::swap(a, b);
    if (b - a >= min_width) return {a, b};
  }
}

inline mulcalc::FunctionModel generated(std::uint64_t seed, const mulcalc::Interval& dom,
                                        bool nonneg = true) {
  mulcalc::GeneratorParams params;
  params.seed = seed;
  params.nonneg_star = nonneg;
  return mulcalc::random_star_convex(params, dom);
}

}  // namespace fixtures
