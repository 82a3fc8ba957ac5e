#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mulcalc/core.hpp"
#include "mulcalc/expression.hpp"
#include "mulcalc/identities.hpp"

using namespace mulcalc;
using fixtures::family;

namespace {

DifferentiableMap affine(double a, double b) {
  return {[a, b](double t) { return a + b * t; }, [b](double) { return b; }};
}

DifferentiableMap cubic(double c0, double c1, double c2, double c3) {
  return {[=](double t) { return c0 + t * (c1 + t * (c2 + t * c3)); },
          [=](double t) { return c1 + t * (2.0 * c2 + 3.0 * t * c3); }};
}

}  // namespace

TEST_CASE("midpoint and trapezoid identity fixtures") {
  const QuadratureConfig quad;
  const Interval unit(0.0, 1.0);
  const auto p2 = fixtures::exp_t2();

  const auto mid = midpoint_identity(p2, unit, quad);
  CHECK(mid.lhs_log == doctest::Approx(-1.0 / 12.0).epsilon(1e-12));
  CHECK(mid.rhs_log == doctest::Approx(-1.0 / 12.0).epsilon(1e-12));
  CHECK(mid.residual <= 1e-10);
  CHECK(mid.holds);

  const auto trap = trapezoid_identity(p2, unit, quad);
  CHECK(trap.lhs_log == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(trap.rhs_log == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(trap.residual <= 1e-10);

  for (const auto& model : {family(FamilyKind::constant, {2.0}, unit),
                            family(FamilyKind::exp_affine, {1.0, 0.0}, unit)}) {
    for (const auto& r : {midpoint_identity(model, unit, quad), trapezoid_identity(model, unit, quad)}) {
      CHECK(std::fabs(r.lhs_log) <= 1e-14);
      CHECK(std::fabs(r.rhs_log) <= 1e-14);
    }
  }
}

TEST_CASE("fixture values agree with the riemann oracle") {
  const Interval unit(0.0, 1.0);
  const double mean = riemann_oracle([](double t) { return t * t; }, unit, 100000);
  CHECK(std::fabs((0.25 - mean) + 1.0 / 12.0) <= 1e-10);
  CHECK(std::fabs((0.5 - mean) - 1.0 / 6.0) <= 1e-10);
}

TEST_CASE("identity report bookkeeping") {
  const auto r = make_identity_report("x", 1.0, 1.5, 0.25);
  CHECK(r.residual == 0.5);
  CHECK_FALSE(r.holds);
  nlohmann::ordered_json j;
  to_json(j, r);
  CHECK(j.dump() ==
        R"({"identity":"x","lhs_log":1.0,"rhs_log":1.5,"residual":0.5,"tolerance":0.25,"holds":false})");
}

TEST_CASE("identities hold on built-ins and 100 generated models") {
  const QuadratureConfig quad;
  Rng rng(31337);
  for (const auto& model : fixtures::builtins(Interval(0.5, 1.5))) {
    const auto iv = fixtures::random_interval(rng, 0.5, 1.5);
    CAPTURE(model.label());
    CHECK(midpoint_identity(model, iv, quad).residual <= 1e-8);
    CHECK(trapezoid_identity(model, iv, quad).residual <= 1e-8);
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto dom = fixtures::random_interval(rng, 0.0, 3.0);
    const auto model = fixtures::generated(seed, dom, seed % 2 == 0);
    CAPTURE(seed);
    CHECK(midpoint_identity(model, dom, quad).residual <= 1e-8);
    CHECK(trapezoid_identity(model, dom, quad).residual <= 1e-8);
  }
}

TEST_CASE("identities survive the finite-difference fallback") {
  const QuadratureConfig quad;
  Rng rng(8);
  auto models = fixtures::builtins(Interval(0.5, 1.5));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    models.push_back(fixtures::generated(seed, Interval(0.5, 1.5)));
  }
  for (const auto& model : models) {
    const auto numeric = model.without_analytic_star();
    const auto iv = fixtures::random_interval(rng, 0.5, 1.5);
    CAPTURE(model.label());
    const auto m1 = midpoint_identity(model, iv, quad);
    const auto m2 = midpoint_identity(numeric, iv, quad);
    CHECK(std::fabs(m1.rhs_log - m2.rhs_log) <= 1e-5);
    CHECK(std::fabs(m1.residual - m2.residual) <= 1e-5);
    const auto t1 = trapezoid_identity(model, iv, quad);
    const auto t2 = trapezoid_identity(numeric, iv, quad);
    CHECK(std::fabs(t1.rhs_log - t2.rhs_log) <= 1e-5);
    CHECK(std::fabs(t1.residual - t2.residual) <= 1e-5);
  }
}

TEST_CASE("integration by parts") {
  const QuadratureConfig quad;
  const Interval unit(0.0, 1.0);
  const auto et = family(FamilyKind::exp_affine, {1.0, 0.0}, unit);
  const auto r = parts_identity(et, affine(0.0, 1.0), unit, quad);
  CHECK(r.lhs_log == doctest::Approx(0.5));
  CHECK(r.rhs_log == doctest::Approx(0.5));

  const auto p2 = fixtures::exp_t2();
  const auto k = parts_identity(p2, affine(3.0, 0.0), unit, quad);
  CHECK(k.lhs_log == doctest::Approx(3.0));
  CHECK(k.residual <= 1e-12);

  const auto c = family(FamilyKind::constant, {5.0}, unit);
  CHECK(parts_identity(c, cubic(1, -2, 0.5, 3), unit, quad).residual <= 1e-12);

  Rng rng(4);
  for (const auto& model : fixtures::builtins(Interval(0.5, 1.5))) {
    const auto g = cubic(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    CAPTURE(model.label());
    CHECK(parts_identity(model, g, Interval(0.6, 1.4), quad).residual <= 1e-8);
  }
}

TEST_CASE("substitution lemma") {
  const QuadratureConfig quad;
  const Interval unit(0.0, 1.0);
  const auto et = family(FamilyKind::exp_affine, {1.0, 0.0}, unit);
  const auto id = affine(0.0, 1.0);
  const auto sub = substitution_identity(et, id, id, unit, quad);
  const auto parts = parts_identity(et, id, unit, quad);
  CHECK(sub.lhs_log == doctest::Approx(parts.lhs_log));
  CHECK(sub.rhs_log == doctest::Approx(parts.rhs_log));

  const auto p2 = fixtures::exp_t2();
  const auto trap = substitution_identity(p2, affine(0.0, 1.0), affine(-0.5, 1.0), unit, quad);
  CHECK(trap.lhs_log == doctest::Approx(1.0 / 6.0));
  CHECK(trap.rhs_log == doctest::Approx(1.0 / 6.0));

  const auto zero = substitution_identity(p2, id, affine(0.0, 0.0), unit, quad);
  CHECK(zero.lhs_log == 0.0);
  CHECK(zero.rhs_log == 0.0);

  // the composed convention is exact for any affine h and cubic g
  Rng rng(12);
  const Interval dom(0.5, 1.5);
  for (const auto& model : fixtures::builtins(dom)) {
    const double lo = rng.uniform(0.5, 1.0);
    const double hi = rng.uniform(1.0, 1.5);
    const Interval iv(0.0, 1.0);
    const auto h = affine(lo, hi - lo);
    const auto g = cubic(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), 0.5);
    CAPTURE(model.label());
    CHECK(substitution_identity(model, h, g, iv, quad, EndpointConvention::composed).residual <=
          1e-8);
  }
}

TEST_CASE("verbatim substitution endpoints need h to fix the endpoints") {
  const QuadratureConfig quad;
  const Interval dom(0.0, 2.0);
  const auto p2 = fixtures::family(FamilyKind::exp_power, {2.0}, dom);
  const auto h = affine(0.5, 1.0);  // [0,1] onto [0.5,1.5]
  const auto g = affine(0.0, 1.0);
  const auto verbatim = substitution_identity(p2, h, g, Interval(0.0, 1.0), quad);
  const auto composed =
      substitution_identity(p2, h, g, Interval(0.0, 1.0), quad, EndpointConvention::composed);
  CHECK_FALSE(verbatim.holds);
  CHECK(composed.holds);
}

TEST_CASE("expression parser feeds the identities") {
  const QuadratureConfig quad;
  const auto g = cli::parse_expression("t^3 - 2*t + 1");
  const auto p2 = fixtures::exp_t2();
  CHECK(parts_identity(p2, g, Interval(0.0, 1.0), quad).residual <= 1e-10);
}
