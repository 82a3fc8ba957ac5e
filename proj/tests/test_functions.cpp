#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "mulcalc/core.hpp"
#include "mulcalc/errors.hpp"
#include "mulcalc/functions.hpp"

using namespace mulcalc;
using fixtures::family;

TEST_CASE("family examples") {
  const auto c = family(FamilyKind::constant, {3.0}, Interval(0.0, 1.0));
  for (double t : {0.0, 0.5, 1.0}) {
    CHECK(c.ln_f(t) == doctest::Approx(std::log(3.0)));
    CHECK(mul_derivative_log(c, t) == 0.0);
  }

  const auto p2 = fixtures::exp_t2();
  CHECK(p2.ln_f(0.5) == 0.25);
  CHECK(mul_derivative_log(p2, 0.5) == 1.0);
  CHECK(*p2.closed_form_mean_log(Interval(0.0, 1.0)) == doctest::Approx(1.0 / 3.0));

  const auto r = family(FamilyKind::exp_recip, {}, Interval(1.0, 2.0));
  CHECK(r.ln_f(2.0) == 0.5);
  CHECK(mul_derivative_log(r, 2.0) == -0.25);
  CHECK(*r.closed_form_mean_log(Interval(1.0, 2.0)) == doctest::Approx(std::numbers::ln2));

  const auto poly = family(FamilyKind::exp_poly, {1.0, 0.0, -2.0}, Interval(0.0, 1.0));
  CHECK(poly.ln_f(0.5) == doctest::Approx(0.5));
  CHECK(mul_derivative_log(poly, 0.5) == doctest::Approx(-2.0));
}

TEST_CASE("invalid family parameters are rejected") {
  CHECK_THROWS_AS(family(FamilyKind::exp_recip, {}, Interval(-1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(family(FamilyKind::exp_recip, {}, Interval(0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(family(FamilyKind::constant, {0.0}, Interval(0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(family(FamilyKind::constant, {}, Interval(0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(family(FamilyKind::exp_power, {2.5}, Interval(-1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(family(FamilyKind::exp_power, {0.5}, Interval(0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(family(FamilyKind::exp_poly, {}, Interval(0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(parse_family_kind("gamma"), DomainError);
}

TEST_CASE("FamilySpec json round trip") {
  FamilySpec spec{FamilyKind::exp_affine, {1.5, -0.5}, Interval(0.25, 2.0)};
  nlohmann::ordered_json j;
  to_json(j, spec);
  CHECK(j.dump() ==
        R"({"kind":"exp_affine","params":[1.5,-0.5],"domain":{"a":0.25,"b":2.0}})");
  CHECK(family_spec_from_json(nlohmann::json::parse(j.dump())) == spec);

  FamilySpec gen{FamilyKind::random_star_convex, {2.0, 1.0}, Interval(0.0, 3.0), 99};
  to_json(j, gen);
  CHECK(family_spec_from_json(nlohmann::json::parse(j.dump())) == gen);

  const auto arr = family_spec_from_json(
      nlohmann::json::parse(R"({"kind":"exp_power","params":[2],"domain":[0,1]})"));
  CHECK(arr.domain == Interval(0.0, 1.0));
  CHECK_THROWS_AS(family_spec_from_json(nlohmann::json::parse(R"({"kind":"exp_power"})")),
                  DomainError);
}

TEST_CASE("degenerate generators reduce to simple families") {
  StarConvexCoefficients linear;
  linear.alpha = 2.0;
  const auto m = make_star_convex(linear, Interval(0.0, 1.0));
  const auto p2 = fixtures::exp_t2();
  for (double t : {0.0, 0.3, 0.7, 1.0}) {
    CHECK(m.ln_f(t) == doctest::Approx(p2.ln_f(t)));
    CHECK(mul_derivative_log(m, t) == doctest::Approx(mul_derivative_log(p2, t)));
  }

  StarConvexCoefficients flat;
  flat.beta = 0.7;
  const auto e = make_star_convex(flat, Interval(1.0, 2.0));
  for (double t : {1.0, 1.5, 2.0}) {
    CHECK(e.ln_f(t) == doctest::Approx(0.7 * (t - 1.0)));
    CHECK(mul_derivative_log(e, t) == doctest::Approx(0.7));
  }
}

TEST_CASE("hinged generator integrates piecewise") {
  StarConvexCoefficients k;
  k.q = 0.5;
  k.hinges = {{1.0, 2.0}};
  k.alpha = -1.0;
  k.beta = 0.25;
  k.offset = 0.1;
  const Interval dom(0.0, 2.0);
  const auto m = make_star_convex(k, dom);
  CHECK(m.breakpoints() == std::vector<double>{1.0});
  const QuadratureConfig quad;
  for (double t : {0.5, 1.0, 1.5, 2.0}) {
    const double numeric =
        integrate([&](double s) { return mul_derivative_log(m, s); }, Interval(0.0, t), quad,
                  m.breakpoints())
            .value;
    CHECK(m.ln_f(t) == doctest::Approx(0.1 + numeric).epsilon(1e-12));
  }
  // min over the domain: vertex of q t^2 - t on the left piece
  CHECK(star_convex_min(k, dom) == doctest::Approx(0.25 - 0.5));
}

TEST_CASE("generated f* is multiplicatively convex for 1000 seeds") {
  Rng rng(2024);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto dom = fixtures::random_interval(rng, 0.0, 3.0);
    const auto model = fixtures::generated(seed, dom);
    CAPTURE(seed);
    REQUIRE(is_mul_convex_sampled(star_as_model(model), dom, 1000, seed ^ 0xABCDu));
    double lowest = HUGE_VAL;
    for (int i = 0; i <= 200; ++i) lowest = std::min(lowest, mul_derivative_log(model, dom.lerp(i / 200.0)));
    REQUIRE(lowest >= -1e-12);
  }
}

TEST_CASE("generator is reproducible bit for bit") {
  const Interval dom(0.2, 2.7);
  const auto m1 = fixtures::generated(77, dom, false);
  const auto m2 = fixtures::generated(77, dom, false);
  const auto other = fixtures::generated(78, dom, false);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double t = dom.lerp(i / 99.0);
    CHECK(mul_derivative_log(m1, t) == mul_derivative_log(m2, t));
    CHECK(m1.ln_f(t) == m2.ln_f(t));
    differs = differs || mul_derivative_log(other, t) != mul_derivative_log(m1, t);
  }
  CHECK(differs);
}

TEST_CASE("generator parameter validation") {
  GeneratorParams p;
  p.n_hinges = -1;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.q_range = {-1.0, 1.0};
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.hinge_slope_range = {-0.5, 1.0};
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.alpha_range = {2.0, 1.0};
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("sampled multiplicative convexity") {
  Rng rng(5);
  CHECK(is_mul_convex_sampled(fixtures::exp_t2(), Interval(0.0, 1.0), 1000, 1));
  for (int i = 0; i < 20; ++i) {
    const auto dom = fixtures::random_interval(rng, -5.0, 5.0);
    const auto affine = family(FamilyKind::exp_affine, {rng.uniform(-3, 3), rng.uniform(-3, 3)}, dom);
    CHECK(is_mul_convex_sampled(affine, dom, 1000, i));
  }
  const auto bump = family(FamilyKind::exp_poly, {0.0, 0.0, -1.0}, Interval(0.0, 1.0));
  CHECK_FALSE(is_mul_convex_sampled(bump, Interval(0.0, 1.0), 0, 1));
}
