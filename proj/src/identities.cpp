#include "mulcalc/identities.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace mulcalc {

namespace {

const Interval kUnit(0.0, 1.0);

// Kinks of ln f* inside `segment`, in the coordinate s of segment.lerp(s).
std::vector<double> unit_breakpoints(const FunctionModel& model, const Interval& segment) {
  std::vector<double> points;
  for (double x : model.breakpoints()) {
    if (segment.a() < x && x < segment.b()) points.push_back((x - segment.a()) / segment.width());
  }
  return points;
}

double integral_or_throw(const RealMap& g, const Interval& iv, const QuadratureConfig& quad,
                         const char* what, std::span<const double> breakpoints = {}) {
  const auto result = integrate(g, iv, quad, breakpoints);
  if (!result.converged) {
    throw NumericalFailure(std::string(what) + ": quadrature did not converge", result.value,
                           result.error_estimate);
  }
  return result.value;
}

void require_inside(const FunctionModel& model, const Interval& iv, const char* what) {
  if (!model.domain().contains(iv)) {
    throw DomainError(std::string(what) + ": interval outside domain of '" + model.label() + "'");
  }
}

}  // namespace

IdentityReport make_identity_report(std::string identity, double lhs_log, double rhs_log,
                                    double tolerance) {
  IdentityReport report;
  report.identity = std::move(identity);
  report.lhs_log = lhs_log;
  report.rhs_log = rhs_log;
  report.residual = std::fabs(lhs_log - rhs_log);
  report.tolerance = tolerance;
  report.holds = report.residual <= tolerance;
  return report;
}

void to_json(nlohmann::ordered_json& j, const IdentityReport& report) {
  j = nlohmann::ordered_json{{"identity", report.identity}, {"lhs_log", report.lhs_log},
                     {"rhs_log", report.rhs_log},   {"residual", report.residual},
                     {"tolerance", report.tolerance}, {"holds", report.holds}};
}

IdentityReport midpoint_identity(const FunctionModel& model, const Interval& iv,
                                 const QuadratureConfig& quad, double tolerance) {
  require_inside(model, iv, "midpoint_identity");
  const double m = iv.midpoint();
  const Interval left(iv.a(), m);
  const Interval right(m, iv.b());

  const double lhs = model.ln_f(m) - mean_log(model, iv, quad);
  const double first = integral_or_throw(
      [&](double t) { return t * mul_derivative_log(model, left.lerp(t)); }, kUnit, quad,
      "midpoint_identity", unit_breakpoints(model, left));
  const double second = integral_or_throw(
      [&](double t) { return (t - 1.0) * mul_derivative_log(model, right.lerp(t)); }, kUnit, quad,
      "midpoint_identity", unit_breakpoints(model, right));
  const double rhs = 0.25 * iv.width() * (first + second);
  return make_identity_report("midpoint", lhs, rhs, tolerance);
}

IdentityReport trapezoid_identity(const FunctionModel& model, const Interval& iv,
                                  const QuadratureConfig& quad, double tolerance) {
  require_inside(model, iv, "trapezoid_identity");
  const double lhs =
      geometric_mean_log(model.ln_f(iv.a()), model.ln_f(iv.b())) - mean_log(model, iv, quad);
  const double weighted = integral_or_throw(
      [&](double t) { return (2.0 * t - 1.0) * mul_derivative_log(model, iv.lerp(t)); }, kUnit,
      quad, "trapezoid_identity", unit_breakpoints(model, iv));
  const double rhs = 0.5 * iv.width() * weighted;
  return make_identity_report("trapezoid", lhs, rhs, tolerance);
}

IdentityReport parts_identity(const FunctionModel& f, const DifferentiableMap& g,
                              const Interval& iv, const QuadratureConfig& quad, double tolerance) {
  require_inside(f, iv, "parts_identity");
  const double lhs = integral_or_throw(
      [&](double t) { return g.value(t) * mul_derivative_log(f, t); }, iv, quad, "parts_identity",
      f.breakpoints());
  const double boundary = g.value(iv.b()) * f.ln_f(iv.b()) - g.value(iv.a()) * f.ln_f(iv.a());
  const double correction = integral_or_throw(
      [&](double t) { return g.derivative(t) * f.ln_f(t); }, iv, quad, "parts_identity",
      f.breakpoints());
  return make_identity_report("parts", lhs, boundary - correction, tolerance);
}

IdentityReport substitution_identity(const FunctionModel& f, const DifferentiableMap& h,
                                     const DifferentiableMap& g, const Interval& iv,
                                     const QuadratureConfig& quad, EndpointConvention convention,
                                     double tolerance) {
  const double lhs = integral_or_throw(
      [&](double t) { return h.derivative(t) * g.value(t) * mul_derivative_log(f, h.value(t)); },
      iv, quad, "substitution_identity");
  const double at_a = convention == EndpointConvention::verbatim ? iv.a() : h.value(iv.a());
  const double at_b = convention == EndpointConvention::verbatim ? iv.b() : h.value(iv.b());
  const double boundary = g.value(iv.b()) * f.ln_f(at_b) - g.value(iv.a()) * f.ln_f(at_a);
  const double correction = integral_or_throw(
      [&](double t) { return g.derivative(t) * f.ln_f(h.value(t)); }, iv, quad,
      "substitution_identity");
  return make_identity_report("substitution", lhs, boundary - correction, tolerance);
}

}  // namespace mulcalc
