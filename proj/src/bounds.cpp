#include "mulcalc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mulcalc/functions.hpp"

namespace mulcalc {

namespace {

constexpr int kHypothesisPairs = 256;
constexpr std::uint64_t kHypothesisSeed = 0x6d756c63616c63ULL;

double shape(double x, Mode mode) { return mode == Mode::strict ? x : std::fabs(x); }

double grid_point(const Interval& iv, int i, int grid) {
  if (grid == 1) return iv.midpoint();
  return i + 1 == grid ? iv.b() : iv.lerp(static_cast<double>(i) / (grid - 1));
}

double midpoint_deviation(const BoundInputs& in) { return std::fabs(in.ln_f_m - in.mean); }

double trapezoid_deviation(const BoundInputs& in) {
  return std::fabs(geometric_mean_log(in.ln_f_a, in.ln_f_b) - in.mean);
}

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::strict ? "strict" : "robust"; }

Mode parse_mode(std::string_view text) {
  if (text == "strict") return Mode::strict;
  if (text == "robust") return Mode::robust;
  throw DomainError("unknown mode '" + std::string(text) + "' (expected strict or robust)");
}

BoundReport make_bound_report(std::string name, Mode mode, double lhs_log, double rhs_log,
                              bool hypothesis_ok) {
  BoundReport report;
  report.name = std::move(name);
  report.mode = mode;
  report.lhs_log = lhs_log;
  report.rhs_log = rhs_log;
  report.margin = rhs_log - lhs_log;
  report.holds = report.margin >= -kBoundSlack;
  report.hypothesis_ok = hypothesis_ok;
  return report;
}

void to_json(nlohmann::ordered_json& j, const BoundReport& report) {
  j = nlohmann::ordered_json{{"name", report.name},       {"mode", std::string(to_string(report.mode))},
                     {"lhs_log", report.lhs_log}, {"rhs_log", report.rhs_log},
                     {"margin", report.margin},   {"holds", report.holds},
                     {"hypothesis_ok", report.hypothesis_ok}};
}

StarEndpointData star_endpoints(const FunctionModel& model, const Interval& iv) {
  return {mul_derivative_log(model, iv.a()), mul_derivative_log(model, iv.midpoint()),
          mul_derivative_log(model, iv.b())};
}

void validate_m_bound(const FunctionModel& model, const Interval& iv, MBound m, Mode mode,
                      int grid) {
  if (!std::isfinite(m.m_log)) throw DomainError("M bound: ln M must be finite");
  if (grid < 1) throw DomainError("M bound: grid must be >= 1");
  const double slack = kBoundSlack * std::max(1.0, std::fabs(m.m_log));
  for (int i = 0; i < grid; ++i) {
    const double t = grid_point(iv, i, grid);
    const double value = shape(mul_derivative_log(model, t), mode);
    if (value > m.m_log + slack) {
      std::ostringstream os;
      os.precision(17);
      os << "M bound violated in " << to_string(mode) << " mode at t = " << t << ": "
         << (mode == Mode::strict ? "ln f*(t) = " : "|ln f*(t)| = ") << value
         << " > ln M = " << m.m_log;
      throw DomainError(os.str());
    }
  }
}

MBound grid_sup_star(const FunctionModel& model, const Interval& iv, Mode mode, int grid) {
  if (grid < 1) throw DomainError("M bound: grid must be >= 1");
  double sup = -HUGE_VAL;
  for (int i = 0; i < grid; ++i) {
    sup = std::max(sup, shape(mul_derivative_log(model, grid_point(iv, i, grid)), mode));
  }
  return MBound{sup};
}

BoundInputs gather_bound_inputs(const FunctionModel& model, const Interval& iv,
                                const QuadratureConfig& quad) {
  if (!model.domain().contains(iv)) {
    throw DomainError("bounds: interval outside domain of '" + model.label() + "'");
  }
  return BoundInputs{
      model,
      iv,
      model.ln_f(iv.a()),
      model.ln_f(iv.midpoint()),
      model.ln_f(iv.b()),
      mean_log(model, iv, quad),
      star_endpoints(model, iv),
      is_mul_convex_sampled(model, iv, kHypothesisPairs, kHypothesisSeed),
      is_mul_convex_sampled(star_as_model(model), iv, kHypothesisPairs, kHypothesisSeed),
  };
}

std::pair<BoundReport, BoundReport> hh_check(const BoundInputs& in) {
  return {make_bound_report("hh_left", Mode::strict, in.ln_f_m, in.mean, in.f_mul_convex),
          make_bound_report("hh_right", Mode::strict, in.mean,
                            geometric_mean_log(in.ln_f_a, in.ln_f_b), in.f_mul_convex)};
}

std::pair<BoundReport, BoundReport> hh_check(const FunctionModel& model, const Interval& iv,
                                             const QuadratureConfig& quad) {
  return hh_check(gather_bound_inputs(model, iv, quad));
}

BoundReport midpoint_bound(const BoundInputs& in, Mode mode) {
  const auto& s = in.star;
  const double rhs = in.iv.width() / 24.0 *
                     (shape(s.ls_a, mode) + 4.0 * shape(s.ls_m, mode) + shape(s.ls_b, mode));
  return make_bound_report("midpoint", mode, midpoint_deviation(in), rhs, in.star_mul_convex);
}

BoundReport midpoint_bound_M(const BoundInputs& in, MBound m, Mode mode) {
  validate_m_bound(in.model, in.iv, m, mode);
  return make_bound_report("midpoint_M", mode, midpoint_deviation(in),
                           in.iv.width() / 4.0 * m.m_log, in.star_mul_convex);
}

BoundReport midpoint_bound_geo(const BoundInputs& in, Mode mode) {
  const double rhs = in.iv.width() / 8.0 * (shape(in.star.ls_a, mode) + shape(in.star.ls_b, mode));
  return make_bound_report("midpoint_geo", mode, midpoint_deviation(in), rhs, in.star_mul_convex);
}

BoundReport trapezoid_bound(const BoundInputs& in, Mode mode) {
  const double rhs = in.iv.width() / 8.0 * (shape(in.star.ls_a, mode) + shape(in.star.ls_b, mode));
  return make_bound_report("trapezoid", mode, trapezoid_deviation(in), rhs, in.star_mul_convex);
}

BoundReport trapezoid_bound_M(const BoundInputs& in, MBound m, Mode mode) {
  validate_m_bound(in.model, in.iv, m, mode);
  return make_bound_report("trapezoid_M", mode, trapezoid_deviation(in),
                           in.iv.width() / 4.0 * m.m_log, in.star_mul_convex);
}

BoundReport midpoint_bound(const FunctionModel& model, const Interval& iv,
                           const QuadratureConfig& quad, Mode mode) {
  return midpoint_bound(gather_bound_inputs(model, iv, quad), mode);
}

BoundReport midpoint_bound_M(const FunctionModel& model, const Interval& iv,
                             const QuadratureConfig& quad, MBound m, Mode mode) {
  validate_m_bound(model, iv, m, mode);
  return midpoint_bound_M(gather_bound_inputs(model, iv, quad), m, mode);
}

BoundReport midpoint_bound_geo(const FunctionModel& model, const Interval& iv,
                               const QuadratureConfig& quad, Mode mode) {
  return midpoint_bound_geo(gather_bound_inputs(model, iv, quad), mode);
}

BoundReport trapezoid_bound(const FunctionModel& model, const Interval& iv,
                            const QuadratureConfig& quad, Mode mode) {
  return trapezoid_bound(gather_bound_inputs(model, iv, quad), mode);
}

BoundReport trapezoid_bound_M(const FunctionModel& model, const Interval& iv,
                              const QuadratureConfig& quad, MBound m, Mode mode) {
  validate_m_bound(model, iv, m, mode);
  return trapezoid_bound_M(gather_bound_inputs(model, iv, quad), m, mode);
}

std::vector<BoundReport> all_bounds(const BoundInputs& in, Mode mode) {
  const MBound m = grid_sup_star(in.model, in.iv, mode);
  auto [left, right] = hh_check(in);
  return {left,
          right,
          midpoint_bound(in, mode),
          midpoint_bound_M(in, m, mode),
          midpoint_bound_geo(in, mode),
          trapezoid_bound(in, mode),
          trapezoid_bound_M(in, m, mode)};
}

}  // namespace mulcalc
