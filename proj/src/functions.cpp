#include "mulcalc/functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mulcalc/rng.hpp"

namespace mulcalc {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_params(const FamilySpec& spec, std::size_t n) {
  if (spec.params.size() != n) {
    throw DomainError(std::string(to_string(spec.kind)) + " expects " + std::to_string(n) +
                      " parameter(s), got " + std::to_string(spec.params.size()));
  }
  for (double p : spec.params) {
    if (!std::isfinite(p)) throw DomainError("family parameters must be finite");
  }
}

bool contains_zero(const Interval& iv) { return iv.a() <= 0.0 && 0.0 <= iv.b(); }

FunctionModel make_exp_power(double p, const Interval& dom) {
  if (p == -1.0) throw DomainError("exp_power: p = -1 is exp_recip");
  const bool integer_p = std::floor(p) == p;
  if (!integer_p && dom.a() < 0.0) {
    throw DomainError("exp_power: non-integer p requires a domain in [0, inf)");
  }
  if (p < 1.0 && p != 0.0 && contains_zero(dom)) {
    throw DomainError("exp_power: p < 1 requires a domain excluding 0");
  }
  RealMap star = [p](double t) { return p == 0.0 ? 0.0 : p * std::pow(t, p - 1.0); };
  return FunctionModel(
      "exp_power(p=" + num(p) + ")", dom, [p](double t) { return std::pow(t, p); }, star,
      RealMap([p](double t) { return std::pow(t, p + 1.0) / (p + 1.0); }));
}

FunctionModel make_exp_poly(const std::vector<double>& c, const Interval& dom) {
  if (c.empty()) throw DomainError("exp_poly needs at least one coefficient");
  auto horner = [](const std::vector<double>& coeffs, double t) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
  };
  std::vector<double> deriv;
  for (std::size_t k = 1; k < c.size(); ++k) deriv.push_back(static_cast<double>(k) * c[k]);
  std::vector<double> prim{0.0};
  for (std::size_t k = 0; k < c.size(); ++k) prim.push_back(c[k] / static_cast<double>(k + 1));

  std::string label = "exp_poly(";
  for (std::size_t k = 0; k < c.size(); ++k) label += (k ? "," : "") + num(c[k]);
  label += ")";
  return FunctionModel(
      label, dom, [c, horner](double t) { return horner(c, t); },
      RealMap([deriv, horner](double t) { return horner(deriv, t); }),
      RealMap([prim, horner](double t) { return horner(prim, t); }));
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::constant: return "constant";
    case FamilyKind::exp_affine: return "exp_affine";
    case FamilyKind::exp_power: return "exp_power";
    case FamilyKind::exp_recip: return "exp_recip";
    case FamilyKind::exp_poly: return "exp_poly";
    case FamilyKind::random_star_convex: return "random_star_convex";
  }
  return "unknown";
}

FamilyKind parse_family_kind(std::string_view text) {
  for (auto kind : {FamilyKind::constant, FamilyKind::exp_affine, FamilyKind::exp_power,
                    FamilyKind::exp_recip, FamilyKind::exp_poly,
                    FamilyKind::random_star_convex}) {
    if (text == to_string(kind)) return kind;
  }
  throw DomainError("unknown function family '" + std::string(text) + "'");
}

void to_json(nlohmann::ordered_json& j, const FamilySpec& spec) {
  j = nlohmann::ordered_json{{"kind", std::string(to_string(spec.kind))},
                     {"params", spec.params},
                     {"domain", {{"a", spec.domain.a()}, {"b", spec.domain.b()}}}};
  if (spec.kind == FamilyKind::random_star_convex) j["seed"] = spec.seed;
}

FamilySpec family_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("family spec must be a JSON object");
  try {
    FamilySpec spec;
    spec.kind = parse_family_kind(j.at("kind").get<std::string>());
    if (j.contains("params")) spec.params = j.at("params").get<std::vector<double>>();
    const auto& d = j.at("domain");
    if (d.is_array()) {
      if (d.size() != 2) throw DomainError("domain array must have two entries");
      spec.domain = Interval(d[0].get<double>(), d[1].get<double>());
    } else {
      spec.domain = Interval(d.at("a").get<double>(), d.at("b").get<double>());
    }
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : j.items()) {
      if (key != "kind" && key != "params" && key != "domain" && key != "seed") {
        throw DomainError("unknown family spec key '" + key + "'");
      }
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed family spec: ") + e.what());
  }
}

FunctionModel make_model(const FamilySpec& spec) {
  const Interval& dom = spec.domain;
  switch (spec.kind) {
    case FamilyKind::constant: {
      require_params(spec, 1);
      const double c = spec.params[0];
      if (!(c > 0.0)) throw DomainError("constant family requires c > 0");
      const double log_c = std::log(c);
      return FunctionModel(
          "constant(c=" + num(c) + ")", dom, [log_c](double) { return log_c; },
          RealMap([](double) { return 0.0; }), RealMap([log_c](double t) { return log_c * t; }));
    }
    case FamilyKind::exp_affine: {
      require_params(spec, 2);
      const double alpha = spec.params[0];
      const double beta = spec.params[1];
      return FunctionModel(
          "exp_affine(alpha=" + num(alpha) + ",beta=" + num(beta) + ")", dom,
          [alpha, beta](double t) { return alpha * t + beta; },
          RealMap([alpha](double) { return alpha; }),
          RealMap([alpha, beta](double t) { return 0.5 * alpha * t * t + beta * t; }));
    }
    case FamilyKind::exp_power:
      require_params(spec, 1);
      return make_exp_power(spec.params[0], dom);
    case FamilyKind::exp_recip:
      require_params(spec, 0);
      if (contains_zero(dom)) throw DomainError("exp_recip: domain must exclude 0");
      return FunctionModel(
          "exp_recip", dom, [](double t) { return 1.0 / t; },
          RealMap([](double t) { return -1.0 / (t * t); }),
          RealMap([](double t) { return std::log(std::fabs(t)); }));
    case FamilyKind::exp_poly:
      for (double p : spec.params) {
        if (!std::isfinite(p)) throw DomainError("family parameters must be finite");
      }
      return make_exp_poly(spec.params, dom);
    case FamilyKind::random_star_convex: {
      GeneratorParams params;
      params.seed = spec.seed;
      if (spec.params.size() > 2) {
        throw DomainError("random_star_convex expects [n_hinges, nonneg_star]");
      }
      if (!spec.params.empty()) params.n_hinges = static_cast<int>(spec.params[0]);
      if (spec.params.size() > 1) params.nonneg_star = spec.params[1] != 0.0;
      return random_star_convex(params, dom);
    }
  }
  throw DomainError("unknown family kind");
}

FunctionModel make_star_convex(const StarConvexCoefficients& coeffs, const Interval& domain) {
  if (!(coeffs.q >= 0.0)) throw DomainError("star-convex generator requires q >= 0");
  for (const auto& [s, c] : coeffs.hinges) {
    if (!(c >= 0.0) || !std::isfinite(s)) {
      throw DomainError("star-convex generator requires finite hinges with c >= 0");
    }
  }
  const double a = domain.a();
  auto h = [coeffs](double t) {
    double v = coeffs.q * t * t + coeffs.alpha * t + coeffs.beta;
    for (const auto& [s, c] : coeffs.hinges) v += c * std::max(0.0, t - s);
    return v;
  };
  auto ln_f = [coeffs, a](double t) {
    double v = coeffs.offset + coeffs.q * (t * t * t - a * a * a) / 3.0 +
               0.5 * coeffs.alpha * (t * t - a * a) + coeffs.beta * (t - a);
    for (const auto& [s, c] : coeffs.hinges) {
      const double above = std::max(0.0, t - s);
      const double above_a = std::max(0.0, a - s);
      v += 0.5 * c * (above * above - above_a * above_a);
    }
    return v;
  };
  std::vector<double> kinks;
  for (const auto& hinge : coeffs.hinges) kinks.push_back(hinge.first);
  return FunctionModel("star_convex", domain, ln_f, RealMap(h)).with_breakpoints(std::move(kinks));
}

double star_convex_min(const StarConvexCoefficients& coeffs, const Interval& domain) {
  std::vector<double> breaks{domain.a(), domain.b()};
  for (const auto& hinge : coeffs.hinges) {
    if (domain.a() < hinge.first && hinge.first < domain.b()) breaks.push_back(hinge.first);
  }
  std::sort(breaks.begin(), breaks.end());

  auto h = [&coeffs](double t) {
    double v = coeffs.q * t * t + coeffs.alpha * t + coeffs.beta;
    for (const auto& [s, c] : coeffs.hinges) v += c * std::max(0.0, t - s);
    return v;
  };
  double best = h(breaks.front());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    best = std::min(best, h(hi));
    if (coeffs.q > 0.0) {
      const double mid = 0.5 * (lo + hi);
      double slope = coeffs.alpha;
      for (const auto& [s, c] : coeffs.hinges) {
        if (s <= mid) slope += c;
      }
      const double stationary = -slope / (2.0 * coeffs.q);
      if (lo < stationary && stationary < hi) best = std::min(best, h(stationary));
    }
  }
  return best;
}

void GeneratorParams::validate() const {
  auto ordered = [](const std::pair<double, double>& r) {
    return std::isfinite(r.first) && std::isfinite(r.second) && r.first <= r.second;
  };
  if (n_hinges < 0) throw DomainError("generator n_hinges must be >= 0");
  if (!ordered(q_range) || q_range.first < 0.0) {
    throw DomainError("generator q_range must be an ordered non-negative range");
  }
  if (!ordered(hinge_slope_range) || hinge_slope_range.first < 0.0) {
    throw DomainError("generator hinge_slope_range must be an ordered non-negative range");
  }
  if (!ordered(alpha_range) || !ordered(beta_range) || !ordered(offset_range)) {
    throw DomainError("generator ranges must be ordered and finite");
  }
}

StarConvexCoefficients draw_star_convex(const GeneratorParams& params, const Interval& domain) {
  params.validate();
  Rng rng(params.seed);
  StarConvexCoefficients coeffs;
  coeffs.q = rng.uniform(params.q_range.first, params.q_range.second);
  for (int i = 0; i < params.n_hinges; ++i) {
    const double s = rng.uniform(domain.a(), domain.b());
    const double c = rng.uniform(params.hinge_slope_range.first, params.hinge_slope_range.second);
    coeffs.hinges.emplace_back(s, c);
  }
  coeffs.alpha = rng.uniform(params.alpha_range.first, params.alpha_range.second);
  coeffs.beta = rng.uniform(params.beta_range.first, params.beta_range.second);
  coeffs.offset = rng.uniform(params.offset_range.first, params.offset_range.second);
  if (params.nonneg_star) {
    const double lowest = star_convex_min(coeffs, domain);
    if (lowest < 0.0) coeffs.beta -= lowest;
  }
  return coeffs;
}

FunctionModel random_star_convex(const GeneratorParams& params, const Interval& domain) {
  return make_star_convex(draw_star_convex(params, domain), domain)
      .relabeled("random_star_convex(seed=" + std::to_string(params.seed) + ")");
}

FunctionModel star_as_model(const FunctionModel& model) {
  return FunctionModel("star(" + model.label() + ")", model.domain(),
                       [model](double t) { return mul_derivative_log(model, t); })
      .with_breakpoints(model.breakpoints());
}

bool is_mul_convex_sampled(const FunctionModel& model, const Interval& iv, int n_pairs,
                           std::uint64_t seed) {
  if (!model.domain().contains(iv)) {
    throw DomainError("is_mul_convex_sampled: interval outside model domain");
  }
  Rng rng(seed);
  auto violates = [&](double x, double y, double s) {
    const double lhs = model.ln_f(std::clamp((1.0 - s) * x + s * y, iv.a(), iv.b()));
    const double rhs = (1.0 - s) * model.ln_f(x) + s * model.ln_f(y);
    return lhs > rhs + 1e-12;
  };
  if (violates(iv.a(), iv.b(), 0.5)) return false;
  for (int i = 0; i < n_pairs; ++i) {
    const double x = rng.uniform(iv.a(), iv.b());
    const double y = rng.uniform(iv.a(), iv.b());
    const double s = rng.uniform01();
    if (violates(x, y, s)) return false;
  }
  return true;
}

}  // namespace mulcalc
