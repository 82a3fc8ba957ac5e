#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mulcalc/interval.hpp"
#include "mulcalc/log_value.hpp"
#include "mulcalc/quadrature.hpp"

namespace mulcalc {

/// A strictly positive function on a closed interval, described in log space.
///
/// `ln_f` returns ln f(t). The multiplicative derivative f*(t) = exp(f'(t)/f(t))
/// is carried as ln f*(t) = (ln f)'(t); when no analytic form is supplied it is
/// recovered by finite differences. An optional primitive of ln f gives closed
/// form multiplicative integrals on any subinterval.
///
/// Evaluation is read-only; copies share the underlying maps.
class FunctionModel {
 public:
  FunctionModel(std::string label, Interval domain, RealMap ln_f,
                std::optional<RealMap> ln_f_star = std::nullopt,
                std::optional<RealMap> ln_f_primitive = std::nullopt);

  const std::string& label() const noexcept { return label_; }
  const Interval& domain() const noexcept { return domain_; }

  /// ln f(t). Throws DomainError outside the domain, NumericalFailure on a
  /// non-finite value.
  double ln_f(double t) const;

  bool has_analytic_star() const noexcept { return static_cast<bool>(impl_->ln_f_star); }

  /// Analytic ln f*(t); requires has_analytic_star().
  double analytic_ln_f_star(double t) const;

  bool has_primitive() const noexcept { return static_cast<bool>(impl_->ln_f_primitive); }

  /// (1/(b-a)) * integral of ln f over `iv`, when a primitive is known.
  std::optional<double> closed_form_mean_log(const Interval& iv) const;

  /// Same model with the analytic ln f* dropped, forcing the finite-difference path.
  FunctionModel without_analytic_star() const;

  /// Same model with a new label.
  FunctionModel relabeled(std::string label) const;

  /// Points of the domain where ln f* is not smooth; quadrature splits there.
  const std::vector<double>& breakpoints() const noexcept { return impl_->breakpoints; }
  FunctionModel with_breakpoints(std::vector<double> points) const;

  /// Raw maps, no domain checks. Used by the combinators.
  const RealMap& raw_ln_f() const noexcept { return impl_->ln_f; }
  const std::optional<RealMap>& raw_primitive() const noexcept { return impl_->ln_f_primitive; }

 private:
  struct Impl {
    RealMap ln_f;
    std::optional<RealMap> ln_f_star;
    std::optional<RealMap> ln_f_primitive;
    std::vector<double> breakpoints;
  };

  FunctionModel(std::string label, Interval domain, std::shared_ptr<const Impl> impl);
  void check_in_domain(double t, const char* what) const;

  std::string label_;
  Interval domain_;
  std::shared_ptr<const Impl> impl_;
};

/// Finite-difference estimate of (ln f)'(t): centered with one Richardson
/// level, one-sided (second order) within a step of either endpoint.
double finite_difference_ln_star(const FunctionModel& model, double t);

/// ln f*(t); analytic when available, otherwise finite differences.
double mul_derivative_log(const FunctionModel& model, double t);

/// Integral of ln f over `iv`, i.e. the log of the multiplicative integral.
/// Throws NumericalFailure when the quadrature does not converge.
double mul_integral_log(const FunctionModel& model, const Interval& iv,
                        const QuadratureConfig& quad);

/// Oriented version: from > to negates, from == to yields 0.
double mul_integral_log(const FunctionModel& model, double from, double to,
                        const QuadratureConfig& quad);

/// Log of the multiplicative integral mean (integral of f^{du})^{1/(b-a)}.
///
/// When the model has a closed form it is returned after a quadrature cross
/// check; disagreement beyond tolerance throws ConsistencyError.
double mean_log(const FunctionModel& model, const Interval& iv, const QuadratureConfig& quad);

/// ln G(x, y) for G(x, y) = sqrt(x y).
double geometric_mean_log(double x_log, double y_log) noexcept;

/// Multiplicative integral as a LogValue.
LogValue mul_integral(const FunctionModel& model, const Interval& iv,
                      const QuadratureConfig& quad);

enum class Combinator { product, quotient, scalar_multiple, power_fn, sum, f_pow_g };

std::string_view to_string(Combinator op);

FunctionModel product(const FunctionModel& f, const FunctionModel& g);
FunctionModel quotient(const FunctionModel& f, const FunctionModel& g);
/// c * f, c > 0.
FunctionModel scalar_multiple(const FunctionModel& f, double c);
/// f^p.
FunctionModel power_fn(const FunctionModel& f, double p);
FunctionModel sum(const FunctionModel& f, const FunctionModel& g);
/// f^g, where the exponent is the positive function g itself.
FunctionModel f_pow_g(const FunctionModel& f, const FunctionModel& g);

/// Dispatches on `op`; scalar operands go with scalar_multiple and power_fn.
FunctionModel combine(Combinator op, const FunctionModel& f,
                      const std::variant<FunctionModel, double>& operand);

/// Largest |ln_f_star - finite difference| over `n_grid` interior points.
double star_consistency_error(const FunctionModel& model, int n_grid = 101);

}  // namespace mulcalc
