#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mulcalc/cli.hpp"
#include "mulcalc/expression.hpp"
#include "mulcalc/means.hpp"
#include "mulcalc/scan.hpp"

namespace mulcalc::cli {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

// Every option value, seeded from defaults, then MULCALC_QUAD_TOL, then the
// --config file; CLI11 overwrites whatever flags are given.
struct Settings {
  std::string config_path;
  QuadratureConfig quad;
  std::string quad_method = "gauss_legendre_composite";

  std::string fn = "exp_power";
  double c = 1.0;
  double p = 2.0;
  double alpha = 1.0;
  double beta = 0.0;
  std::vector<double> coeffs;
  std::uint64_t seed = 0;
  int n_hinges = 3;
  std::string nonneg_star = "true";
  double a = 0.0;
  double b = 1.0;

  std::string check = "all";
  std::string mode = "strict";
  std::optional<double> m_log;

  std::string identity = "midpoint";
  std::string g = "t";
  std::string h = "t";
  double tol = kIdentityTolerance;
  std::string endpoints = "verbatim";

  long trials = 0;
  std::string out_path;
  std::string format = "jsonl";
  int jobs = 1;
  std::optional<std::uint64_t> replay;
  long trial_index = 0;
  bool timing = false;

  int prop = 41;
  std::string variant = "paper";
};

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw DomainError("expected true or false, got '" + text + "'");
}

std::string scalar_text(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  return value.dump();
}

void apply_config(Settings& s, const json& j) {
  if (!j.is_object()) throw DomainError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "quadrature") {
      from_json(value, s.quad);
      s.quad_method = std::string(to_string(s.quad.method));
    } else if (key == "fn") {
      s.fn = value.is_object() ? value.dump() : value.get<std::string>();
    } else if (key == "c") {
      s.c = value.get<double>();
    } else if (key == "p") {
      s.p = value.get<double>();
    } else if (key == "alpha") {
      s.alpha = value.get<double>();
    } else if (key == "beta") {
      s.beta = value.get<double>();
    } else if (key == "coeffs") {
      s.coeffs = value.get<std::vector<double>>();
    } else if (key == "seed") {
      s.seed = value.get<std::uint64_t>();
    } else if (key == "n_hinges") {
      s.n_hinges = value.get<int>();
    } else if (key == "nonneg_star") {
      s.nonneg_star = scalar_text(value);
    } else if (key == "a") {
      s.a = value.get<double>();
    } else if (key == "b") {
      s.b = value.get<double>();
    } else if (key == "check") {
      s.check = value.get<std::string>();
    } else if (key == "mode") {
      s.mode = value.get<std::string>();
    } else if (key == "m_log") {
      s.m_log = value.get<double>();
    } else if (key == "identity") {
      s.identity = value.get<std::string>();
    } else if (key == "g") {
      s.g = value.get<std::string>();
    } else if (key == "h") {
      s.h = value.get<std::string>();
    } else if (key == "tol") {
      s.tol = value.get<double>();
    } else if (key == "endpoints") {
      s.endpoints = value.get<std::string>();
    } else if (key == "trials") {
      s.trials = value.get<long>();
    } else if (key == "out") {
      s.out_path = value.get<std::string>();
    } else if (key == "format") {
      s.format = value.get<std::string>();
    } else if (key == "jobs") {
      s.jobs = value.get<int>();
    } else if (key == "prop") {
      s.prop = value.get<int>();
    } else if (key == "variant") {
      s.variant = value.get<std::string>();
    } else {
      throw DomainError("unknown config key '" + key + "'");
    }
  }
}

std::string find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

void seed_settings(Settings& s, const std::vector<std::string>& args) {
  if (const char* env = std::getenv("MULCALC_QUAD_TOL")) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(tol > 0.0)) {
      throw DomainError("MULCALC_QUAD_TOL must be a positive number, got '" + std::string(env) +
                        "'");
    }
    s.quad.abs_tol = tol;
    s.quad.rel_tol = tol;
  }
  const std::string path = find_config_path(args);
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  try {
    apply_config(s, json::parse(in));
  } catch (const json::exception& e) {
    throw DomainError("config file '" + path + "': " + e.what());
  }
}

void add_common(CLI::App* cmd, Settings& s) {
  cmd->add_option("--config", s.config_path, "JSON config file; flags take precedence");
  cmd->add_option("--quad-method", s.quad_method,
                  "gauss_legendre_composite | adaptive_simpson");
  cmd->add_option("--quad-abs-tol", s.quad.abs_tol, "Absolute quadrature tolerance");
  cmd->add_option("--quad-rel-tol", s.quad.rel_tol, "Relative quadrature tolerance");
  cmd->add_option("--quad-max-subdivisions", s.quad.max_subdivisions, "Adaptive bisection budget");
  cmd->add_option("--quad-panels", s.quad.panels, "Panels of the composite rule");
  cmd->add_option("--quad-nodes", s.quad.nodes, "Gauss-Legendre nodes per panel (1-5)");
}

void add_function(CLI::App* cmd, Settings& s) {
  cmd->add_option("--fn", s.fn, "Family name or FamilySpec JSON");
  cmd->add_option("--c", s.c, "constant: value c > 0");
  cmd->add_option("--p", s.p, "exp_power: exponent p");
  cmd->add_option("--alpha", s.alpha, "exp_affine: slope");
  cmd->add_option("--beta", s.beta, "exp_affine: intercept");
  cmd->add_option("--coeffs", s.coeffs, "exp_poly: coefficients c0 c1 ...");
  cmd->add_option("--seed", s.seed, "random_star_convex: generator seed");
  cmd->add_option("--n-hinges", s.n_hinges, "random_star_convex: hinge count");
  cmd->add_option("--nonneg-star", s.nonneg_star, "random_star_convex: force ln f* >= 0");
  cmd->add_option("--a", s.a, "Left endpoint");
  cmd->add_option("--b", s.b, "Right endpoint");
}

QuadratureConfig quad_of(const Settings& s) {
  QuadratureConfig q = s.quad;
  q.method = parse_quad_method(s.quad_method);
  q.validate();
  return q;
}

FunctionModel build_model(const Settings& s) {
  const Interval iv(s.a, s.b);
  if (!s.fn.empty() && s.fn.front() == '{') {
    json j;
    try {
      j = json::parse(s.fn);
    } catch (const json::exception& e) {
      throw DomainError(std::string("--fn: ") + e.what());
    }
    if (j.is_object() && !j.contains("domain")) j["domain"] = {{"a", s.a}, {"b", s.b}};
    return make_model(family_spec_from_json(j));
  }
  FamilySpec spec;
  spec.kind = parse_family_kind(s.fn);
  spec.domain = iv;
  switch (spec.kind) {
    case FamilyKind::constant: spec.params = {s.c}; break;
    case FamilyKind::exp_affine: spec.params = {s.alpha, s.beta}; break;
    case FamilyKind::exp_power: spec.params = {s.p}; break;
    case FamilyKind::exp_recip: break;
    case FamilyKind::exp_poly:
      if (s.coeffs.empty()) throw DomainError("exp_poly needs --coeffs");
      spec.params = s.coeffs;
      break;
    case FamilyKind::random_star_convex:
      spec.params = {static_cast<double>(s.n_hinges), parse_bool(s.nonneg_star) ? 1.0 : 0.0};
      spec.seed = s.seed;
      break;
  }
  return make_model(spec);
}

int cmd_verify(const Settings& s, std::ostream& out) {
  const QuadratureConfig quad = quad_of(s);
  const Mode mode = parse_mode(s.mode);
  const FunctionModel model = build_model(s);
  const Interval iv(s.a, s.b);
  if (!model.domain().contains(iv)) throw DomainError("--a/--b outside the function's domain");

  static const std::vector<std::string> kChecks{"hh",       "midpoint",  "midpoint_m",
                                                "midpoint_geo", "trapezoid", "trapezoid_m",
                                                "all"};
  if (std::find(kChecks.begin(), kChecks.end(), s.check) == kChecks.end()) {
    throw DomainError("unknown --check '" + s.check + "'");
  }
  const BoundInputs in = gather_bound_inputs(model, iv, quad);
  const MBound m = s.m_log ? MBound{*s.m_log} : grid_sup_star(model, iv, mode);
  const bool all = s.check == "all";

  std::vector<BoundReport> reports;
  if (all || s.check == "hh") {
    auto [left, right] = hh_check(in);
    reports.push_back(left);
    reports.push_back(right);
  }
  if (all || s.check == "midpoint") reports.push_back(midpoint_bound(in, mode));
  if (all || s.check == "midpoint_m") reports.push_back(midpoint_bound_M(in, m, mode));
  if (all || s.check == "midpoint_geo") reports.push_back(midpoint_bound_geo(in, mode));
  if (all || s.check == "trapezoid") reports.push_back(trapezoid_bound(in, mode));
  if (all || s.check == "trapezoid_m") reports.push_back(trapezoid_bound_M(in, m, mode));

  bool ok = true;
  for (const auto& r : reports) {
    out << ojson(r).dump() << "\n";
    ok = ok && r.holds;
  }
  return ok ? kPass : kViolation;
}

int cmd_identity(const Settings& s, std::ostream& out) {
  const QuadratureConfig quad = quad_of(s);
  const FunctionModel model = build_model(s);
  const Interval iv(s.a, s.b);
  if (!(s.tol >= 0.0)) throw DomainError("--tol must be >= 0");

  IdentityReport report;
  if (s.identity == "midpoint") {
    report = midpoint_identity(model, iv, quad, s.tol);
  } else if (s.identity == "trapezoid") {
    report = trapezoid_identity(model, iv, quad, s.tol);
  } else if (s.identity == "parts") {
    report = parts_identity(model, parse_expression(s.g), iv, quad, s.tol);
  } else if (s.identity == "substitution") {
    EndpointConvention convention;
    if (s.endpoints == "verbatim") {
      convention = EndpointConvention::verbatim;
    } else if (s.endpoints == "composed") {
      convention = EndpointConvention::composed;
    } else {
      throw DomainError("--endpoints must be verbatim or composed");
    }
    report = substitution_identity(model, parse_expression(s.h), parse_expression(s.g), iv, quad,
                                   convention, s.tol);
  } else {
    throw DomainError("unknown --identity '" + s.identity + "'");
  }
  out << ojson(report).dump() << "\n";
  return report.holds ? kPass : kViolation;
}

int cmd_means(const Settings& s, std::ostream& out) {
  const MeanPair mp(s.a, s.b);
  BoundReport report;
  if (s.prop == 41) {
    report = prop41_check(mp, s.p);
  } else if (s.prop == 42) {
    if (s.variant == "paper") {
      report = prop42_check(mp, Prop42Variant::paper);
    } else if (s.variant == "corrected") {
      report = prop42_check(mp, Prop42Variant::corrected);
    } else {
      throw DomainError("--variant must be paper or corrected");
    }
  } else {
    throw DomainError("--prop must be 41 or 42");
  }
  out << ojson(report).dump() << "\n";
  return report.holds ? kPass : kViolation;
}

int cmd_scan(const Settings& s, std::ostream& out, std::ostream& err) {
  ScanConfig cfg;
  cfg.master_seed = s.seed;
  cfg.n_trials = s.trials;
  cfg.mode = parse_mode(s.mode);
  cfg.nonneg_star = parse_bool(s.nonneg_star);
  cfg.n_hinges = s.n_hinges;
  cfg.quad = quad_of(s);
  cfg.jobs = s.jobs;
  const OutputFormat format = parse_output_format(s.format);
  cfg.validate();

  std::ofstream file;
  if (!s.out_path.empty()) {
    file.open(s.out_path, std::ios::out | std::ios::trunc);
    if (!file) throw DomainError("cannot open --out file '" + s.out_path + "'");
  }
  std::ostream& stream = s.out_path.empty() ? out : file;
  if (format == OutputFormat::csv) write_csv_header(stream);

  std::vector<double> times;
  auto sink = [&](const ScanRecord& record) {
    if (format == OutputFormat::csv) {
      write_csv_rows(stream, record, cfg.mode);
    } else {
      stream << ojson(record).dump() << "\n";
    }
    times.push_back(record.wall_time_ms);
  };

  ScanSummary summary;
  const auto start = std::chrono::steady_clock::now();
  if (s.replay) {
    const ScanRecord record = run_trial(s.trial_index, *s.replay, cfg);
    summary.add(record, cfg.mode);
    sink(record);
  } else {
    summary = run_scan(cfg, [&](const ScanRecord& record) {
      sink(record);
      stream.flush();
    });
  }
  if (s.timing) {
    const double total =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    ojson trailer{{"trailer", {{"wall_time_ms", total}, {"trial_wall_time_ms", times}}}};
    if (format == OutputFormat::csv) {
      stream << "# " << trailer.dump() << "\n";
    } else {
      stream << trailer.dump() << "\n";
    }
  }
  stream.flush();
  err << ojson{{"summary", summary}}.dump() << "\n";
  if (summary.numerical_failures > 0) return kNumericalFailure;
  return summary.clean() ? kPass : kViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  try {
    seed_settings(s, args);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Log-domain multiplicative calculus checks"};
  app.name("mulcalc");
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Check Hermite-Hadamard, midpoint and trapezoid bounds");
  add_common(verify, s);
  add_function(verify, s);
  verify->add_option("--check", s.check,
                     "hh | midpoint | midpoint_m | midpoint_geo | trapezoid | trapezoid_m | all");
  verify->add_option("--mode", s.mode, "strict | robust");
  verify->add_option("--m-log", s.m_log, "ln M for the M corollaries (default: grid sup)");

  auto* identity = app.add_subcommand("identity", "Evaluate both sides of an identity");
  identity->set_help_flag("--help", "Print this help message and exit");
  add_common(identity, s);
  add_function(identity, s);
  identity->add_option("--identity", s.identity, "midpoint | trapezoid | parts | substitution");
  identity->add_option("--g", s.g, "g(t) for parts/substitution");
  identity->add_option("--h", s.h, "h(t) for substitution");
  identity->add_option("--tol", s.tol, "Residual tolerance");
  identity->add_option("--endpoints", s.endpoints, "substitution boundary: verbatim | composed");

  auto* scan = app.add_subcommand("scan", "Randomized falsification scan");
  add_common(scan, s);
  scan->add_option("--trials", s.trials, "Number of trials");
  scan->add_option("--seed", s.seed, "Master seed");
  scan->add_option("--mode", s.mode, "strict | robust");
  scan->add_option("--nonneg-star", s.nonneg_star, "Force ln f* >= 0 (true|false)");
  scan->add_option("--n-hinges", s.n_hinges, "Hinges per generated ln f*");
  scan->add_option("--out", s.out_path, "Write records to this file instead of stdout");
  scan->add_option("--format", s.format, "jsonl | csv");
  scan->add_option("--jobs", s.jobs, "Worker threads");
  scan->add_option("--replay", s.replay, "Rerun the single trial with this recorded seed");
  scan->add_option("--trial-index", s.trial_index, "trial_index reported with --replay");
  scan->add_flag("--timing", s.timing, "Append a wall-time trailer");

  auto* means = app.add_subcommand("means", "Special-means inequalities");
  add_common(means, s);
  means->add_option("--prop", s.prop, "41 | 42");
  means->add_option("--a", s.a, "0 < a");
  means->add_option("--b", s.b, "a < b");
  means->add_option("--p", s.p, "Exponent for prop 41 (p >= 2)");
  means->add_option("--variant", s.variant, "paper | corrected (prop 42)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(s, out);
    if (identity->parsed()) return cmd_identity(s, out);
    if (scan->parsed()) return cmd_scan(s, out, err);
    return cmd_means(s, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << " (best estimate " << e.best_estimate()
        << ", error bound " << e.error_bound() << ")\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace mulcalc::cli
