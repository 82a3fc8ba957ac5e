#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mulcalc/interval.hpp"

namespace mulcalc {

using RealMap = std::function<double(double)>;

enum class QuadMethod { gauss_legendre_composite, adaptive_simpson };

std::string_view to_string(QuadMethod method);
QuadMethod parse_quad_method(std::string_view text);

struct QuadratureConfig {
  QuadMethod method = QuadMethod::gauss_legendre_composite;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 4096;
  int panels = 64;
  /// Gauss-Legendre nodes per panel, 1..5.
  int nodes = 5;

  /// Throws DomainError when a field is out of range.
  void validate() const;

  /// Acceptance threshold for an estimate of magnitude |value|.
  double tolerance_for(double value) const;
};

void to_json(nlohmann::ordered_json& j, const QuadratureConfig& cfg);
/// Missing keys keep the values already in `cfg`.
void from_json(const nlohmann::json& j, QuadratureConfig& cfg);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Integrates `g` over `iv`.
///
/// gauss_legendre_composite evaluates the fixed composite rule at `panels` and
/// `2 * panels`; when the two disagree beyond tolerance it falls back to
/// global adaptive bisection seeded with the finer partition. adaptive_simpson
/// runs the same adaptive loop with a Richardson-corrected Simpson panel rule.
/// The result is deterministic for fixed inputs. Non-convergence is reported
/// through `converged`, not thrown.
///
/// `breakpoints` inside `iv` split it into pieces integrated separately; pass
/// the points where `g` is not smooth, since no sampling estimator can see a
/// kink that sits between a panel edge and its first node.
QuadratureResult integrate(const RealMap& g, const Interval& iv, const QuadratureConfig& cfg,
                           std::span<const double> breakpoints = {});

/// Fixed composite Gauss-Legendre rule with `panels` equal panels and `nodes`
/// nodes per panel.
double composite_gauss_legendre(const RealMap& g, const Interval& iv, int panels, int nodes);

/// Composite midpoint rule with n uniform panels, summed with compensation.
/// Kept independent of `integrate` so it can serve as a test oracle.
double riemann_oracle(const RealMap& g, const Interval& iv, long n);

}  // namespace mulcalc
