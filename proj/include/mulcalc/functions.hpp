#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mulcalc/core.hpp"

namespace mulcalc {

enum class FamilyKind { constant, exp_affine, exp_power, exp_recip, exp_poly, random_star_convex };

std::string_view to_string(FamilyKind kind);
FamilyKind parse_family_kind(std::string_view text);

/// A named function family with its parameters.
///
/// params by kind:
///   constant            [c]              f = c, c > 0
///   exp_affine          [alpha, beta]    f = e^{alpha t + beta}
///   exp_power           [p]              f = e^{t^p}
///   exp_recip           []               f = e^{1/t}
///   exp_poly            [c0, c1, ...]    f = e^{c0 + c1 t + ...}
///   random_star_convex  [n_hinges, nonneg_star]  drawn from `seed`
struct FamilySpec {
  FamilyKind kind = FamilyKind::constant;
  std::vector<double> params;
  Interval domain{0.0, 1.0};
  std::uint64_t seed = 0;

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

/// JSON keys: kind, params, domain {a, b}, and seed for random_star_convex.
void to_json(nlohmann::ordered_json& j, const FamilySpec& spec);
FamilySpec family_spec_from_json(const nlohmann::json& j);

/// Builds the model with analytic ln f, ln f* and, except for the generator,
/// a primitive of ln f. Throws DomainError on invalid parameters.
FunctionModel make_model(const FamilySpec& spec);

/// ln f* = h(t) = q t^2 + sum_i c_i max(0, t - s_i) + alpha t + beta, and
/// ln f(t) = offset + integral of h from domain.a() to t.
struct StarConvexCoefficients {
  double q = 0.0;
  std::vector<std::pair<double, double>> hinges;  // (s_i, c_i)
  double alpha = 0.0;
  double beta = 0.0;
  double offset = 0.0;
};

/// Model from explicit coefficients; requires q >= 0 and every c_i >= 0 so
/// that h is convex.
FunctionModel make_star_convex(const StarConvexCoefficients& coeffs, const Interval& domain);

/// Minimum of h over the domain (h is convex and piecewise quadratic).
double star_convex_min(const StarConvexCoefficients& coeffs, const Interval& domain);

struct GeneratorParams {
  std::uint64_t seed = 0;
  int n_hinges = 3;
  std::pair<double, double> q_range{0.0, 2.0};
  std::pair<double, double> hinge_slope_range{0.0, 3.0};
  std::pair<double, double> alpha_range{-3.0, 3.0};
  std::pair<double, double> beta_range{-2.0, 2.0};
  std::pair<double, double> offset_range{-1.0, 1.0};
  bool nonneg_star = true;

  void validate() const;
};

/// Coefficients drawn deterministically from `params.seed`. With nonneg_star
/// beta is raised just enough that min h = 0 when h dips below zero.
StarConvexCoefficients draw_star_convex(const GeneratorParams& params, const Interval& domain);

/// make_star_convex(draw_star_convex(params, domain), domain).
FunctionModel random_star_convex(const GeneratorParams& params, const Interval& domain);

/// Model whose ln f is the given model's ln f*; lets the convexity sampler
/// test the hypothesis placed on f*.
FunctionModel star_as_model(const FunctionModel& model);

/// Samples n_pairs (x, y, s) in iv x iv x [0, 1] and checks
/// ln f((1-s)x + s y) <= (1-s) ln f(x) + s ln f(y) + 1e-12.
bool is_mul_convex_sampled(const FunctionModel& model, const Interval& iv, int n_pairs,
                           std::uint64_t seed);

}  // namespace mulcalc
