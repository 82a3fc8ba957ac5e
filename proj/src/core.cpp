#include "mulcalc/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace mulcalc {

namespace {

constexpr int kValidationSamples = 65;

std::string format_point(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

std::vector<double> merged_breakpoints(const FunctionModel& f, const FunctionModel& g) {
  std::vector<double> points = f.breakpoints();
  points.insert(points.end(), g.breakpoints().begin(), g.breakpoints().end());
  return points;
}

Interval intersect(const Interval& x, const Interval& y, const char* op) {
  const double a = std::max(x.a(), y.a());
  const double b = std::min(x.b(), y.b());
  if (!(a < b)) {
    throw DomainError(std::string(op) + ": operand domains do not overlap");
  }
  return Interval(a, b);
}

std::optional<RealMap> both_stars(const FunctionModel& f, const FunctionModel& g,
                                  auto&& rule) {
  if (!f.has_analytic_star() || !g.has_analytic_star()) {
    return RealMap([f, g, rule](double t) {
      return rule(mul_derivative_log(f, t), mul_derivative_log(g, t));
    });
  }
  return RealMap([f, g, rule](double t) {
    return rule(f.analytic_ln_f_star(t), g.analytic_ln_f_star(t));
  });
}

}  // namespace

FunctionModel::FunctionModel(std::string label, Interval domain, RealMap ln_f,
                             std::optional<RealMap> ln_f_star,
                             std::optional<RealMap> ln_f_primitive)
    : label_(std::move(label)),
      domain_(domain),
      impl_(std::make_shared<const Impl>(
          Impl{std::move(ln_f), std::move(ln_f_star), std::move(ln_f_primitive), {}})) {
  if (!impl_->ln_f) throw DomainError("FunctionModel '" + label_ + "': ln_f is empty");
  for (int i = 0; i < kValidationSamples; ++i) {
    const double t = (i + 1 == kValidationSamples)
                         ? domain_.b()
                         : domain_.lerp(static_cast<double>(i) / (kValidationSamples - 1));
    if (!std::isfinite(impl_->ln_f(t))) {
      throw DomainError("FunctionModel '" + label_ + "': f is not finite and positive at t = " +
                        format_point(t));
    }
    if (impl_->ln_f_star && !std::isfinite((*impl_->ln_f_star)(t))) {
      throw DomainError("FunctionModel '" + label_ + "': ln f* is not finite at t = " +
                        format_point(t));
    }
  }
}

FunctionModel::FunctionModel(std::string label, Interval domain,
                             std::shared_ptr<const Impl> impl)
    : label_(std::move(label)), domain_(domain), impl_(std::move(impl)) {}

void FunctionModel::check_in_domain(double t, const char* what) const {
  if (!domain_.contains(t)) {
    throw DomainError(std::string(what) + ": t = " + format_point(t) + " outside domain [" +
                      format_point(domain_.a()) + ", " + format_point(domain_.b()) +
                      "] of '" + label_ + "'");
  }
}

double FunctionModel::ln_f(double t) const {
  check_in_domain(t, "ln_f");
  const double v = impl_->ln_f(t);
  if (!std::isfinite(v)) {
    throw NumericalFailure("ln_f of '" + label_ + "' is not finite at t = " + format_point(t));
  }
  return v;
}

double FunctionModel::analytic_ln_f_star(double t) const {
  check_in_domain(t, "ln_f_star");
  if (!impl_->ln_f_star) {
    throw DomainError("model '" + label_ + "' has no analytic multiplicative derivative");
  }
  const double v = (*impl_->ln_f_star)(t);
  if (!std::isfinite(v)) {
    throw NumericalFailure("ln_f_star of '" + label_ + "' is not finite at t = " +
                           format_point(t));
  }
  return v;
}

std::optional<double> FunctionModel::closed_form_mean_log(const Interval& iv) const {
  if (!impl_->ln_f_primitive) return std::nullopt;
  if (!domain_.contains(iv)) throw DomainError("closed_form_mean_log: interval outside domain");
  const auto& primitive = *impl_->ln_f_primitive;
  return (primitive(iv.b()) - primitive(iv.a())) / iv.width();
}

FunctionModel FunctionModel::without_analytic_star() const {
  return FunctionModel(label_ + " [fd]", domain_,
                       std::make_shared<const Impl>(
                           Impl{impl_->ln_f, std::nullopt, impl_->ln_f_primitive,
                                impl_->breakpoints}));
}

FunctionModel FunctionModel::with_breakpoints(std::vector<double> points) const {
  std::vector<double> inside;
  for (double x : points) {
    if (domain_.a() < x && x < domain_.b()) inside.push_back(x);
  }
  std::sort(inside.begin(), inside.end());
  inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
  return FunctionModel(label_, domain_,
                       std::make_shared<const Impl>(Impl{impl_->ln_f, impl_->ln_f_star,
                                                         impl_->ln_f_primitive,
                                                         std::move(inside)}));
}

FunctionModel FunctionModel::relabeled(std::string label) const {
  return FunctionModel(std::move(label), domain_, impl_);
}

double finite_difference_ln_star(const FunctionModel& model, double t) {
  const Interval& dom = model.domain();
  if (!dom.contains(t)) {
    throw DomainError("mul_derivative_log: t = " + format_point(t) + " outside domain of '" +
                      model.label() + "'");
  }
  double h = std::max(1e-6, 1e-6 * std::fabs(t));
  h = std::min(h, dom.width() / 4.0);

  auto F = [&model](double x) { return model.ln_f(x); };
  std::function<double(double)> stencil;
  if (t - h < dom.a()) {
    stencil = [&](double s) { return (-3.0 * F(t) + 4.0 * F(t + s) - F(t + 2.0 * s)) / (2.0 * s); };
  } else if (t + h > dom.b()) {
    stencil = [&](double s) { return (3.0 * F(t) - 4.0 * F(t - s) + F(t - 2.0 * s)) / (2.0 * s); };
  } else {
    stencil = [&](double s) { return (F(t + s) - F(t - s)) / (2.0 * s); };
  }
  const double value = (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0;
  if (!std::isfinite(value)) {
    throw NumericalFailure("finite difference of ln f is not finite at t = " + format_point(t));
  }
  return value;
}

double mul_derivative_log(const FunctionModel& model, double t) {
  if (model.has_analytic_star()) return model.analytic_ln_f_star(t);
  return finite_difference_ln_star(model, t);
}

double mul_integral_log(const FunctionModel& model, const Interval& iv,
                        const QuadratureConfig& quad) {
  if (!model.domain().contains(iv)) {
    throw DomainError("mul_integral_log: interval [" + format_point(iv.a()) + ", " +
                      format_point(iv.b()) + "] outside domain of '" + model.label() + "'");
  }
  const auto result =
      integrate([&model](double t) { return model.ln_f(t); }, iv, quad, model.breakpoints());
  if (!result.converged) {
    throw NumericalFailure("mul_integral_log: quadrature did not converge for '" +
                               model.label() + "'",
                           result.value, result.error_estimate);
  }
  return result.value;
}

double mul_integral_log(const FunctionModel& model, double from, double to,
                        const QuadratureConfig& quad) {
  if (from == to) {
    if (!model.domain().contains(from)) {
      throw DomainError("mul_integral_log: point outside domain");
    }
    return 0.0;
  }
  if (from < to) return mul_integral_log(model, Interval(from, to), quad);
  return -mul_integral_log(model, Interval(to, from), quad);
}

double mean_log(const FunctionModel& model, const Interval& iv, const QuadratureConfig& quad) {
  if (!model.domain().contains(iv)) {
    throw DomainError("mean_log: interval outside domain of '" + model.label() + "'");
  }
  const auto result =
      integrate([&model](double t) { return model.ln_f(t); }, iv, quad, model.breakpoints());
  if (!result.converged) {
    throw NumericalFailure("mean_log: quadrature did not converge for '" + model.label() + "'",
                           result.value / iv.width(), result.error_estimate / iv.width());
  }
  const double numeric = result.value / iv.width();
  const auto closed = model.closed_form_mean_log(iv);
  if (!closed) return numeric;

  const double allowed =
      10.0 * std::max(quad.tolerance_for(result.value), result.error_estimate) / iv.width();
  if (!(std::fabs(*closed - numeric) <= allowed)) {
    throw ConsistencyError("mean_log: closed form " + format_point(*closed) +
                               " disagrees with quadrature " + format_point(numeric) +
                               " for '" + model.label() + "'",
                           numeric, std::fabs(*closed - numeric));
  }
  return *closed;
}

double geometric_mean_log(double x_log, double y_log) noexcept {
  return 0.5 * x_log + 0.5 * y_log;
}

LogValue mul_integral(const FunctionModel& model, const Interval& iv,
                      const QuadratureConfig& quad) {
  return LogValue::from_log(mul_integral_log(model, iv, quad));
}

std::string_view to_string(Combinator op) {
  switch (op) {
    case Combinator::product: return "product";
    case Combinator::quotient: return "quotient";
    case Combinator::scalar_multiple: return "scalar_multiple";
    case Combinator::power_fn: return "power_fn";
    case Combinator::sum: return "sum";
    case Combinator::f_pow_g: return "f_pow_g";
  }
  return "unknown";
}

FunctionModel product(const FunctionModel& f, const FunctionModel& g) {
  const Interval dom = intersect(f.domain(), g.domain(), "product");
  std::optional<RealMap> primitive;
  if (f.has_primitive() && g.has_primitive()) {
    primitive = [pf = *f.raw_primitive(), pg = *g.raw_primitive()](double t) {
      return pf(t) + pg(t);
    };
  }
  return FunctionModel(
      "(" + f.label() + ")*(" + g.label() + ")", dom,
      [lf = f.raw_ln_f(), lg = g.raw_ln_f()](double t) { return lf(t) + lg(t); },
      both_stars(f, g, [](double x, double y) { return x + y; }), std::move(primitive))
      .with_breakpoints(merged_breakpoints(f, g));
}

FunctionModel quotient(const FunctionModel& f, const FunctionModel& g) {
  const Interval dom = intersect(f.domain(), g.domain(), "quotient");
  std::optional<RealMap> primitive;
  if (f.has_primitive() && g.has_primitive()) {
    primitive = [pf = *f.raw_primitive(), pg = *g.raw_primitive()](double t) {
      return pf(t) - pg(t);
    };
  }
  return FunctionModel(
      "(" + f.label() + ")/(" + g.label() + ")", dom,
      [lf = f.raw_ln_f(), lg = g.raw_ln_f()](double t) { return lf(t) - lg(t); },
      both_stars(f, g, [](double x, double y) { return x - y; }), std::move(primitive))
      .with_breakpoints(merged_breakpoints(f, g));
}

FunctionModel scalar_multiple(const FunctionModel& f, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError("scalar_multiple: c must be finite and positive");
  }
  const double log_c = std::log(c);
  std::optional<RealMap> star;
  if (f.has_analytic_star()) {
    star = [f](double t) { return f.analytic_ln_f_star(t); };
  } else {
    star = [f](double t) { return mul_derivative_log(f, t); };
  }
  std::optional<RealMap> primitive;
  if (f.has_primitive()) {
    primitive = [pf = *f.raw_primitive(), log_c](double t) { return log_c * t + pf(t); };
  }
  return FunctionModel(
      format_point(c) + "*(" + f.label() + ")", f.domain(),
      [lf = f.raw_ln_f(), log_c](double t) { return log_c + lf(t); }, std::move(star),
      std::move(primitive))
      .with_breakpoints(f.breakpoints());
}

FunctionModel power_fn(const FunctionModel& f, double p) {
  if (!std::isfinite(p)) throw DomainError("power_fn: exponent must be finite");
  std::optional<RealMap> primitive;
  if (f.has_primitive()) {
    primitive = [pf = *f.raw_primitive(), p](double t) { return p * pf(t); };
  }
  return FunctionModel(
      "(" + f.label() + ")^" + format_point(p), f.domain(),
      [lf = f.raw_ln_f(), p](double t) { return p * lf(t); },
      RealMap([f, p](double t) { return p * mul_derivative_log(f, t); }), std::move(primitive))
      .with_breakpoints(f.breakpoints());
}

FunctionModel sum(const FunctionModel& f, const FunctionModel& g) {
  const Interval dom = intersect(f.domain(), g.domain(), "sum");
  // ln(f + g) = ln f + log1p(g/f), evaluated around the larger term.
  auto ln_sum = [lf = f.raw_ln_f(), lg = g.raw_ln_f()](double t) {
    const double x = lf(t);
    const double y = lg(t);
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(-std::fabs(x - y)));
  };
  auto star = [f, g](double t) {
    const double x = f.ln_f(t);
    const double y = g.ln_f(t);
    const double weight_f = 1.0 / (1.0 + std::exp(y - x));
    const double weight_g = 1.0 / (1.0 + std::exp(x - y));
    return weight_f * mul_derivative_log(f, t) + weight_g * mul_derivative_log(g, t);
  };
  return FunctionModel("(" + f.label() + ")+(" + g.label() + ")", dom, ln_sum, RealMap(star))
      .with_breakpoints(merged_breakpoints(f, g));
}

FunctionModel f_pow_g(const FunctionModel& f, const FunctionModel& g) {
  const Interval dom = intersect(f.domain(), g.domain(), "f_pow_g");
  auto ln_pow = [lf = f.raw_ln_f(), lg = g.raw_ln_f()](double t) {
    return std::exp(lg(t)) * lf(t);
  };
  // (f^g)* = (f*)^g * f^{g'}, with g' = g * ln g*.
  auto star = [f, g](double t) {
    const double g_value = std::exp(g.ln_f(t));
    const double g_prime = g_value * mul_derivative_log(g, t);
    return g_value * mul_derivative_log(f, t) + g_prime * f.ln_f(t);
  };
  return FunctionModel("(" + f.label() + ")^(" + g.label() + ")", dom, ln_pow, RealMap(star))
      .with_breakpoints(merged_breakpoints(f, g));
}

FunctionModel combine(Combinator op, const FunctionModel& f,
                      const std::variant<FunctionModel, double>& operand) {
  const auto* model = std::get_if<FunctionModel>(&operand);
  const auto* scalar = std::get_if<double>(&operand);
  switch (op) {
    case Combinator::scalar_multiple:
      if (!scalar) throw DomainError("scalar_multiple expects a scalar operand");
      return scalar_multiple(f, *scalar);
    case Combinator::power_fn:
      if (!scalar) throw DomainError("power_fn expects a scalar operand");
      return power_fn(f, *scalar);
    case Combinator::product:
    case Combinator::quotient:
    case Combinator::sum:
    case Combinator::f_pow_g:
      break;
  }
  if (!model) {
    throw DomainError(std::string(to_string(op)) + " expects a function operand");
  }
  switch (op) {
    case Combinator::product: return product(f, *model);
    case Combinator::quotient: return quotient(f, *model);
    case Combinator::sum: return sum(f, *model);
    default: return f_pow_g(f, *model);
  }
}

double star_consistency_error(const FunctionModel& model, int n_grid) {
  if (n_grid < 1) throw DomainError("star_consistency_error: n_grid must be >= 1");
  const Interval& dom = model.domain();
  double worst = 0.0;
  for (int i = 1; i <= n_grid; ++i) {
    const double t = dom.lerp(static_cast<double>(i) / (n_grid + 1));
    const double deviation =
        std::fabs(mul_derivative_log(model, t) - finite_difference_ln_star(model, t));
    worst = std::max(worst, deviation);
  }
  return worst;
}

}  // namespace mulcalc
