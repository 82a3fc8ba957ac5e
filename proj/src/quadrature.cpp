#include "mulcalc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace mulcalc {

namespace {

struct GaussRule {
  std::array<double, 5> x{};
  std::array<double, 5> w{};
  int n = 0;
};

// Nodes and weights on [-1, 1].
const GaussRule& gauss_rule(int nodes) {
  static const std::array<GaussRule, 5> rules = {{
      {{0.0}, {2.0}, 1},
      {{-0.57735026918962576451, 0.57735026918962576451}, {1.0, 1.0}, 2},
      {{-0.77459666924148337704, 0.0, 0.77459666924148337704},
       {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0},
       3},
      {{-0.86113631159405257522, -0.33998104358485626480, 0.33998104358485626480,
        0.86113631159405257522},
       {0.34785484513745385737, 0.65214515486254614263, 0.65214515486254614263,
        0.34785484513745385737},
       4},
      {{-0.90617984593866399280, -0.53846931010568309104, 0.0, 0.53846931010568309104,
        0.90617984593866399280},
       {0.23692688505618908751, 0.47862867049936646804, 0.56888888888888888889,
        0.47862867049936646804, 0.23692688505618908751},
       5},
  }};
  return rules[static_cast<std::size_t>(nodes - 1)];
}

class CountingMap {
 public:
  explicit CountingMap(const RealMap& g) : g_(g) {}
  double operator()(double t) {
    ++count_;
    return g_(t);
  }
  long count() const { return count_; }

 private:
  const RealMap& g_;
  long count_ = 0;
};

double gauss_panel(CountingMap& g, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double center = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < rule.n; ++i) {
    sum += rule.w[i] * g(center + half * rule.x[i]);
  }
  return half * sum;
}

double simpson_panel(CountingMap& g, double a, double b) {
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (g(a) + 4.0 * g(m) + g(b));
}

struct Segment {
  double a;
  double b;
  double estimate;
  double error;
};

struct WorstFirst {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

template <typename Refine>
QuadratureResult adaptive(CountingMap& g, const Interval& iv, int initial_panels,
                          const QuadratureConfig& cfg, Refine refine) {
  std::priority_queue<Segment, std::vector<Segment>, WorstFirst> queue;
  const double width = iv.width() / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double a = iv.a() + i * width;
    const double b = (i + 1 == initial_panels) ? iv.b() : iv.a() + (i + 1) * width;
    queue.push(refine(g, a, b));
  }

  auto totals = [&queue]() {
    auto copy = queue;
    std::vector<Segment> segments;
    segments.reserve(copy.size());
    while (!copy.empty()) {
      segments.push_back(copy.top());
      copy.pop();
    }
    std::sort(segments.begin(), segments.end(),
              [](const Segment& x, const Segment& y) { return x.a < y.a; });
    double value = 0.0;
    double error = 0.0;
    for (const auto& s : segments) {
      value += s.estimate;
      error += s.error;
    }
    return std::pair{value, error};
  };

  double running_value = 0.0;
  double running_error = 0.0;
  {
    auto [v, e] = totals();
    running_value = v;
    running_error = e;
  }

  int subdivisions = 0;
  while (running_error > cfg.tolerance_for(running_value) &&
         subdivisions < cfg.max_subdivisions) {
    const Segment worst = queue.top();
    queue.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(worst.a < m && m < worst.b)) {
      queue.push(worst);
      break;  // cannot bisect further in double precision
    }
    const Segment left = refine(g, worst.a, m);
    const Segment right = refine(g, m, worst.b);
    running_value += left.estimate + right.estimate - worst.estimate;
    running_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
  }

  auto [value, error] = totals();
  QuadratureResult result;
  result.value = value;
  result.error_estimate = error;
  result.converged = error <= cfg.tolerance_for(value);
  return result;
}

}  // namespace

std::string_view to_string(QuadMethod method) {
  switch (method) {
    case QuadMethod::gauss_legendre_composite:
      return "gauss_legendre_composite";
    case QuadMethod::adaptive_simpson:
      return "adaptive_simpson";
  }
  return "unknown";
}

QuadMethod parse_quad_method(std::string_view text) {
  if (text == "gauss_legendre_composite" || text == "gauss") {
    return QuadMethod::gauss_legendre_composite;
  }
  if (text == "adaptive_simpson" || text == "simpson") return QuadMethod::adaptive_simpson;
  throw DomainError("unknown quadrature method '" + std::string(text) + "'");
}

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
    throw DomainError("quadrature abs_tol must be > 0");
  }
  if (!(rel_tol >= 0.0) || !std::isfinite(rel_tol)) {
    throw DomainError("quadrature rel_tol must be >= 0");
  }
  if (max_subdivisions < 1) throw DomainError("quadrature max_subdivisions must be >= 1");
  if (panels < 1) throw DomainError("quadrature panels must be >= 1");
  if (nodes < 1 || nodes > 5) throw DomainError("quadrature nodes must be in 1..5");
}

double QuadratureConfig::tolerance_for(double value) const {
  return std::max(abs_tol, rel_tol * std::fabs(value));
}

void to_json(nlohmann::ordered_json& j, const QuadratureConfig& cfg) {
  j = nlohmann::ordered_json{{"method", std::string(to_string(cfg.method))},
                     {"abs_tol", cfg.abs_tol},
                     {"rel_tol", cfg.rel_tol},
                     {"max_subdivisions", cfg.max_subdivisions},
                     {"panels", cfg.panels},
                     {"nodes", cfg.nodes}};
}

void from_json(const nlohmann::json& j, QuadratureConfig& cfg) {
  if (!j.is_object()) throw DomainError("quadrature config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "method") {
      cfg.method = parse_quad_method(value.get<std::string>());
    } else if (key == "abs_tol") {
      cfg.abs_tol = value.get<double>();
    } else if (key == "rel_tol") {
      cfg.rel_tol = value.get<double>();
    } else if (key == "max_subdivisions") {
      cfg.max_subdivisions = value.get<int>();
    } else if (key == "panels") {
      cfg.panels = value.get<int>();
    } else if (key == "nodes") {
      cfg.nodes = value.get<int>();
    } else {
      throw DomainError("unknown quadrature config key '" + key + "'");
    }
  }
}

double composite_gauss_legendre(const RealMap& g, const Interval& iv, int panels, int nodes) {
  if (panels < 1) throw DomainError("composite_gauss_legendre: panels must be >= 1");
  if (nodes < 1 || nodes > 5) throw DomainError("composite_gauss_legendre: nodes must be 1..5");
  CountingMap counted(g);
  const GaussRule& rule = gauss_rule(nodes);
  const double width = iv.width() / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = iv.a() + i * width;
    const double b = (i + 1 == panels) ? iv.b() : iv.a() + (i + 1) * width;
    sum += gauss_panel(counted, a, b, rule);
  }
  return sum;
}

namespace {

QuadratureResult integrate_piece(const RealMap& g, const Interval& iv,
                                 const QuadratureConfig& cfg) {
  CountingMap counted(g);
  QuadratureResult result;

  if (cfg.method == QuadMethod::gauss_legendre_composite) {
    // A companion rule on different nodes guards the halving test against
    // coincidental agreement on panels that contain a kink.
    const GaussRule& rule = gauss_rule(cfg.nodes);
    const GaussRule& companion = gauss_rule(cfg.nodes >= 3 ? cfg.nodes - 2 : cfg.nodes + 1);
    auto composite = [&](int panels, const GaussRule& r) {
      const double width = iv.width() / panels;
      double sum = 0.0;
      for (int i = 0; i < panels; ++i) {
        const double a = iv.a() + i * width;
        const double b = (i + 1 == panels) ? iv.b() : iv.a() + (i + 1) * width;
        sum += gauss_panel(counted, a, b, r);
      }
      return sum;
    };
    const double coarse = composite(cfg.panels, rule);
    const double fine = composite(2 * cfg.panels, rule);
    const double fine_companion = composite(2 * cfg.panels, companion);
    const double discrepancy =
        std::max(std::fabs(fine - coarse), std::fabs(fine - fine_companion));
    if (discrepancy <= cfg.tolerance_for(fine)) {
      result.value = fine;
      result.error_estimate = discrepancy;
      result.converged = true;
    } else {
      result = adaptive(counted, iv, 2 * cfg.panels, cfg,
                        [&rule, &companion](CountingMap& f, double a, double b) {
                          const double m = 0.5 * (a + b);
                          const double whole = gauss_panel(f, a, b, rule);
                          const double halves = gauss_panel(f, a, m, rule) + gauss_panel(f, m, b, rule);
                          const double check =
                              gauss_panel(f, a, m, companion) + gauss_panel(f, m, b, companion);
                          const double error =
                              std::max(std::fabs(halves - whole), std::fabs(halves - check));
                          return Segment{a, b, halves, error};
                        });
    }
  } else {
    result = adaptive(counted, iv, cfg.panels, cfg, [](CountingMap& f, double a, double b) {
      const double m = 0.5 * (a + b);
      const double whole = simpson_panel(f, a, b);
      const double halves = simpson_panel(f, a, m) + simpson_panel(f, m, b);
      const double delta = (halves - whole) / 15.0;
      return Segment{a, b, halves + delta, std::fabs(delta)};
    });
  }

  result.evaluations = counted.count();
  return result;
}

}  // namespace

QuadratureResult integrate(const RealMap& g, const Interval& iv, const QuadratureConfig& cfg,
                           std::span<const double> breakpoints) {
  cfg.validate();
  std::vector<double> cuts{iv.a()};
  for (double x : breakpoints) {
    if (iv.a() < x && x < iv.b()) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(iv.b());

  QuadratureResult result;
  result.converged = true;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Interval span(cuts[i], cuts[i + 1]);
    QuadratureConfig share = cfg;
    share.abs_tol = cfg.abs_tol * span.width() / iv.width();
    const QuadratureResult piece = integrate_piece(g, span, share);
    result.value += piece.value;
    result.error_estimate += piece.error_estimate;
    result.evaluations += piece.evaluations;
    result.converged = result.converged && piece.converged;
  }
  result.converged = result.converged && result.error_estimate <= cfg.tolerance_for(result.value);
  if (!std::isfinite(result.value) || !std::isfinite(result.error_estimate)) {
    throw NumericalFailure("integrate: integrand produced a non-finite value", result.value,
                           result.error_estimate);
  }
  return result;
}

double riemann_oracle(const RealMap& g, const Interval& iv, long n) {
  if (n < 1) throw DomainError("riemann_oracle: n must be >= 1");
  const double h = iv.width() / static_cast<double>(n);
  // Neumaier summation
  double sum = 0.0;
  double compensation = 0.0;
  for (long i = 0; i < n; ++i) {
    const double term = g(iv.a() + (static_cast<double>(i) + 0.5) * h);
    const double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      compensation += (sum - t) + term;
    } else {
      compensation += (term - t) + sum;
    }
    sum = t;
  }
  const double value = (sum + compensation) * h;
  if (!std::isfinite(value)) throw NumericalFailure("riemann_oracle: non-finite evaluation");
  return value;
}

}  // namespace mulcalc
