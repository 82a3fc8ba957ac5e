#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mulcalc/core.hpp"

namespace mulcalc {

/// strict evaluates right-hand sides with ln f* as published; robust
/// substitutes |ln f*| for each endpoint term.
enum class Mode { strict, robust };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

inline constexpr double kBoundSlack = 1e-12;

struct BoundReport {
  std::string name;
  Mode mode = Mode::strict;
  double lhs_log = 0.0;
  double rhs_log = 0.0;
  double margin = 0.0;  // rhs_log - lhs_log
  bool holds = true;    // margin >= -kBoundSlack
  /// Whether the sampled hypothesis of the inequality held. Advisory only.
  bool hypothesis_ok = true;
};

BoundReport make_bound_report(std::string name, Mode mode, double lhs_log, double rhs_log,
                              bool hypothesis_ok = true);

/// Keys: name, mode, lhs_log, rhs_log, margin, holds, hypothesis_ok.
void to_json(nlohmann::ordered_json& j, const BoundReport& report);

/// ln f* at a, (a+b)/2 and b.
struct StarEndpointData {
  double ls_a = 0.0;
  double ls_m = 0.0;
  double ls_b = 0.0;
};

StarEndpointData star_endpoints(const FunctionModel& model, const Interval& iv);

/// ln M for a bound f* <= M (strict) or |ln f*| <= ln M (robust).
struct MBound {
  double m_log = 0.0;
};

inline constexpr int kBoundGrid = 1001;

/// Checks the bound on a uniform grid including both endpoints; throws
/// DomainError naming the first violating grid point.
void validate_m_bound(const FunctionModel& model, const Interval& iv, MBound m, Mode mode,
                      int grid = kBoundGrid);

/// Smallest M valid for `mode` on the grid: max of ln f* (strict) or |ln f*|
/// (robust).
MBound grid_sup_star(const FunctionModel& model, const Interval& iv, Mode mode,
                     int grid = kBoundGrid);

/// Everything the inequality checks share, computed once.
struct BoundInputs {
  FunctionModel model;
  Interval iv;
  double ln_f_a = 0.0;
  double ln_f_m = 0.0;
  double ln_f_b = 0.0;
  double mean = 0.0;
  StarEndpointData star;
  bool f_mul_convex = true;     // sampled: ln f convex on iv
  bool star_mul_convex = true;  // sampled: ln f* convex on iv
};

BoundInputs gather_bound_inputs(const FunctionModel& model, const Interval& iv,
                                const QuadratureConfig& quad);

/// Hermite-Hadamard sandwich f(m) <= mean <= G(f(a), f(b)) as two reports,
/// "hh_left" and "hh_right".
std::pair<BoundReport, BoundReport> hh_check(const BoundInputs& in);
std::pair<BoundReport, BoundReport> hh_check(const FunctionModel& model, const Interval& iv,
                                             const QuadratureConfig& quad);

/// |ln f(m) - mean| <= (b-a)/24 (s(ln f*(a)) + 4 s(ln f*(m)) + s(ln f*(b))).
BoundReport midpoint_bound(const BoundInputs& in, Mode mode);
BoundReport midpoint_bound(const FunctionModel& model, const Interval& iv,
                           const QuadratureConfig& quad, Mode mode);

/// |ln f(m) - mean| <= (b-a)/4 ln M.
BoundReport midpoint_bound_M(const BoundInputs& in, MBound m, Mode mode);
BoundReport midpoint_bound_M(const FunctionModel& model, const Interval& iv,
                             const QuadratureConfig& quad, MBound m, Mode mode);

/// |ln f(m) - mean| <= (b-a)/8 (s(ln f*(a)) + s(ln f*(b))).
BoundReport midpoint_bound_geo(const BoundInputs& in, Mode mode);
BoundReport midpoint_bound_geo(const FunctionModel& model, const Interval& iv,
                               const QuadratureConfig& quad, Mode mode);

/// |ln G(f(a), f(b)) - mean| <= (b-a)/8 (s(ln f*(a)) + s(ln f*(b))).
BoundReport trapezoid_bound(const BoundInputs& in, Mode mode);
BoundReport trapezoid_bound(const FunctionModel& model, const Interval& iv,
                            const QuadratureConfig& quad, Mode mode);

/// |ln G(f(a), f(b)) - mean| <= (b-a)/4 ln M.
BoundReport trapezoid_bound_M(const BoundInputs& in, MBound m, Mode mode);
BoundReport trapezoid_bound_M(const FunctionModel& model, const Interval& iv,
                              const QuadratureConfig& quad, MBound m, Mode mode);

/// The seven reports above in a fixed order: hh_left, hh_right, midpoint,
/// midpoint_M, midpoint_geo, trapezoid, trapezoid_M. M defaults to the grid
/// sup for `mode`.
std::vector<BoundReport> all_bounds(const BoundInputs& in, Mode mode);

}  // namespace mulcalc
