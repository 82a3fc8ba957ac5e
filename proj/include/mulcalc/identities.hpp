#pragma once

#include <string>

#include "json.hpp"
#include "mulcalc/core.hpp"

namespace mulcalc {

inline constexpr double kIdentityTolerance = 1e-8;

/// Both sides of a multiplicative identity in log space.
struct IdentityReport {
  std::string identity;
  double lhs_log = 0.0;
  double rhs_log = 0.0;
  double residual = 0.0;
  double tolerance = kIdentityTolerance;
  bool holds = true;
};

IdentityReport make_identity_report(std::string identity, double lhs_log, double rhs_log,
                                    double tolerance);

/// Keys: identity, lhs_log, rhs_log, residual, tolerance, holds.
void to_json(nlohmann::ordered_json& j, const IdentityReport& report);

/// A real map together with its derivative.
struct DifferentiableMap {
  RealMap value;
  RealMap derivative;
};

/// Midpoint identity, m = (a+b)/2:
///   ln f(m) - mean_log = (b-a)/4 * [ int_0^1 t ln f*((1-t)a + t m) dt
///                                  + int_0^1 (t-1) ln f*((1-t)m + t b) dt ]
IdentityReport midpoint_identity(const FunctionModel& model, const Interval& iv,
                                 const QuadratureConfig& quad,
                                 double tolerance = kIdentityTolerance);

/// Trapezoid identity:
///   ln G(f(a), f(b)) - mean_log = (b-a)/2 * int_0^1 (2t-1) ln f*((1-t)a + t b) dt
IdentityReport trapezoid_identity(const FunctionModel& model, const Interval& iv,
                                  const QuadratureConfig& quad,
                                  double tolerance = kIdentityTolerance);

/// Multiplicative integration by parts:
///   int g ln f* = g(b) ln f(b) - g(a) ln f(a) - int g' ln f
IdentityReport parts_identity(const FunctionModel& f, const DifferentiableMap& g,
                              const Interval& iv, const QuadratureConfig& quad,
                              double tolerance = kIdentityTolerance);

/// Which points the boundary term of the substitution identity evaluates f at.
enum class EndpointConvention {
  /// f(b)^{g(b)} / f(a)^{g(a)} at the integration endpoints, as published.
  verbatim,
  /// f(h(b))^{g(b)} / f(h(a))^{g(a)}, the form that holds for every h.
  composed,
};

/// Substitution lemma:
///   int h' g (ln f* o h) = g(b) ln f(.) - g(a) ln f(.) - int g' (ln f o h)
/// with the boundary points chosen by `convention`.
IdentityReport substitution_identity(const FunctionModel& f, const DifferentiableMap& h,
                                     const DifferentiableMap& g, const Interval& iv,
                                     const QuadratureConfig& quad,
                                     EndpointConvention convention = EndpointConvention::verbatim,
                                     double tolerance = kIdentityTolerance);

}  // namespace mulcalc
