#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "mulcalc/bounds.hpp"
#include "mulcalc/core.hpp"
#include "mulcalc/errors.hpp"
#include "mulcalc/means.hpp"

using namespace mulcalc;

TEST_CASE("mean values at (1,2)") {
  const MeanPair mp(1.0, 2.0);
  CHECK(arithmetic(mp) == 1.5);
  CHECK(harmonic(mp) == doctest::Approx(4.0 / 3.0));
  CHECK(logarithmic(mp) == doctest::Approx(1.0 / std::numbers::ln2));
  CHECK(p_logarithmic(mp, 2.0) == doctest::Approx(std::sqrt(7.0 / 3.0)));
  CHECK(p_logarithmic_pow(mp, 2.0) == doctest::Approx(7.0 / 3.0));
  CHECK(p_logarithmic(MeanPair(1.0, 2.0), 3.0) == doctest::Approx(std::cbrt(15.0 / 4.0)));
}

TEST_CASE("mean pair and exponent validation") {
  CHECK_THROWS_AS(MeanPair(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(MeanPair(2.0, 1.0), DomainError);
  CHECK_THROWS_AS(MeanPair(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(p_logarithmic(MeanPair(1.0, 2.0), 0.0), DomainError);
  CHECK_THROWS_AS(p_logarithmic(MeanPair(1.0, 2.0), -1.0), DomainError);
  CHECK_THROWS_AS(prop41_check(MeanPair(1.0, 2.0), 1.5), DomainError);
}

TEST_CASE("means collapse as b approaches a") {
  for (double a : {0.01, 1.0, 37.0}) {
    const MeanPair mp(a, a * (1.0 + 1e-8));
    CHECK(std::fabs(arithmetic(mp) - a) <= 1e-6 * a);
    CHECK(std::fabs(harmonic(mp) - a) <= 1e-6 * a);
    CHECK(std::fabs(logarithmic(mp) - a) <= 1e-6 * a);
    CHECK(std::fabs(p_logarithmic(mp, 3.0) - a) <= 1e-6 * a);
  }
  const MeanPair near(1.0, 1.0 + 1e-8);
  const auto p41 = prop41_check(near, 2.0);
  CHECK(std::fabs(p41.lhs_log) <= 1e-6);
  CHECK(std::fabs(p41.rhs_log) <= 1e-6);
  const auto p42 = prop42_check(near, Prop42Variant::corrected);
  CHECK(std::fabs(p42.lhs_log) <= 1e-6);
  CHECK(std::fabs(p42.rhs_log) <= 1e-6);
}

TEST_CASE("H <= G <= L <= A on 1000 pairs") {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.uniform(1e-3, 100.0);
    double b = rng.uniform(1e-3, 100.0);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const MeanPair mp(a, b);
    const double g = std::exp(geometric_mean_log(std::log(a), std::log(b)));
    const double slack = 1e-12 * b;
    CAPTURE(a);
    CAPTURE(b);
    CHECK(harmonic(mp) <= g + slack);
    CHECK(g <= logarithmic(mp) + slack);
    CHECK(logarithmic(mp) <= arithmetic(mp) + slack);
    CHECK(a <= harmonic(mp) + slack);
    CHECK(arithmetic(mp) <= b + slack);
    const double lp = p_logarithmic(mp, rng.uniform(2.0, 5.0));
    CHECK(a - slack <= lp);
    CHECK(lp <= b + slack);
  }
}

TEST_CASE("A^p - L_p^p check for e^{t^p}") {
  const auto r = prop41_check(MeanPair(1.0, 2.0), 2.0);
  CHECK(r.lhs_log == doctest::Approx(-1.0 / 12.0).epsilon(1e-12));
  CHECK(r.rhs_log == doctest::Approx(0.75));
  CHECK(r.holds);
  const auto r13 = prop41_check(MeanPair(1.0, 3.0), 2.0);
  CHECK(r13.lhs_log == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(r13.rhs_log == doctest::Approx(2.0));
  CHECK(r13.holds);
}

TEST_CASE("A^p - L_p^p check agrees with the bounds pathway") {
  const QuadratureConfig quad;
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    double a = rng.uniform(0.1, 3.0);
    double b = rng.uniform(0.1, 3.0);
    if (std::fabs(a - b) < 0.05) continue;
    if (a > b) std::swap(a, b);
    const double p = rng.uniform(2.0, 5.0);
    const Interval iv(a, b);
    const auto model = fixtures::family(FamilyKind::exp_power, {p}, iv);
    const auto in = gather_bound_inputs(model, iv, quad);
    const auto geo = midpoint_bound_geo(in, Mode::strict);
    const auto r = prop41_check(MeanPair(a, b), p);
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(p);
    CHECK(std::fabs(r.lhs_log - (in.ln_f_m - in.mean)) <= 1e-9);
    CHECK(std::fabs(std::fabs(r.lhs_log) - geo.lhs_log) <= 1e-9);
    CHECK(std::fabs(r.rhs_log - geo.rhs_log) <= 1e-9 * std::max(1.0, geo.rhs_log));
  }
}

TEST_CASE("1/H - 1/L check for e^{1/t}: stated bound fails, corrected bound holds") {
  const MeanPair mp(1.0, 2.0);
  // closed-form oracle: 1/H - 1/L = 3/4 - ln 2
  const double oracle = 0.75 - std::numbers::ln2;
  CHECK(1.0 / harmonic(mp) - 1.0 / logarithmic(mp) == doctest::Approx(oracle));

  const auto paper = prop42_check(mp, Prop42Variant::paper);
  CHECK(paper.lhs_log == doctest::Approx(0.056853).epsilon(1e-5));
  CHECK(paper.rhs_log == -0.0625);
  CHECK(paper.margin == doctest::Approx(-0.1194).epsilon(1e-3));
  CHECK_FALSE(paper.holds);
  CHECK_FALSE(paper.hypothesis_ok);

  const auto corrected = prop42_check(mp, Prop42Variant::corrected);
  CHECK(corrected.rhs_log == 0.25);
  CHECK(corrected.holds);
  CHECK(corrected.mode == Mode::robust);

  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.uniform(1e-2, 50.0);
    double b = rng.uniform(1e-2, 50.0);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK_FALSE(prop42_check(MeanPair(a, b), Prop42Variant::paper).holds);
    CHECK(prop42_check(MeanPair(a, b), Prop42Variant::corrected).holds);
  }
}
