#include "mulcalc/scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <thread>

#include "mulcalc/rng.hpp"

namespace mulcalc::cli {

namespace {

constexpr long kBlockSize = 64;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
  if (text == "jsonl" || text == "json-lines" || text == "json") return OutputFormat::json_lines;
  if (text == "csv") return OutputFormat::csv;
  throw DomainError("unknown output format '" + std::string(text) + "'");
}

void ScanConfig::validate() const {
  if (n_trials < 0) throw DomainError("scan: trials must be >= 0");
  if (jobs < 1) throw DomainError("scan: jobs must be >= 1");
  if (n_hinges < 0) throw DomainError("scan: n_hinges must be >= 0");
  if (!(range_lo < range_hi) || !(min_width > 0.0) || min_width >= range_hi - range_lo) {
    throw DomainError("scan: invalid interval range");
  }
  quad.validate();
}

ScanRecord run_trial(long trial_index, std::uint64_t seed, const ScanConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ScanRecord record;
  record.trial_index = trial_index;
  record.seed = seed;

  Rng rng(seed);
  double a = 0.0;
  double b = 0.0;
  do {
    a = rng.uniform(cfg.range_lo, cfg.range_hi);
    b = rng.uniform(cfg.range_lo, cfg.range_hi);
    if (a > b) std::swap(a, b);
  } while (b - a < cfg.min_width);
  record.interval = Interval(a, b);
  record.family.kind = FamilyKind::random_star_convex;
  record.family.params = {static_cast<double>(cfg.n_hinges), cfg.nonneg_star ? 1.0 : 0.0};
  record.family.domain = record.interval;
  record.family.seed = rng.next_u64();

  try {
    const FunctionModel model = make_model(record.family);
    record.identities.push_back(midpoint_identity(model, record.interval, cfg.quad));
    record.identities.push_back(trapezoid_identity(model, record.interval, cfg.quad));
    record.bounds = all_bounds(gather_bound_inputs(model, record.interval, cfg.quad), cfg.mode);
  } catch (const NumericalFailure& e) {
    record.identities.clear();
    record.bounds.clear();
    record.failure = e.what();
  }
  record.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return record;
}

void ScanSummary::add(const ScanRecord& record, Mode mode) {
  ++trials;
  if (record.failure) {
    ++numerical_failures;
    return;
  }
  for (const auto& id : record.identities) {
    if (!id.holds) ++identity_failures[id.identity];
  }
  for (const auto& bound : record.bounds) {
    if (bound.holds) continue;
    const bool is_hh = bound.name.rfind("hh_", 0) == 0;
    const bool asserted = bound.hypothesis_ok && (is_hh || mode == Mode::strict);
    ++(asserted ? violations : unasserted)[bound.name];
  }
}

bool ScanSummary::clean() const {
  return identity_failures.empty() && violations.empty() && numerical_failures == 0;
}

void to_json(nlohmann::ordered_json& j, const ScanRecord& record) {
  j = nlohmann::ordered_json{{"trial_index", record.trial_index},
                     {"seed", record.seed},
                     {"family", record.family},
                     {"interval", {{"a", record.interval.a()}, {"b", record.interval.b()}}},
                     {"identities", record.identities},
                     {"bounds", record.bounds}};
  if (record.failure) j["error"] = *record.failure;
}

void to_json(nlohmann::ordered_json& j, const ScanSummary& summary) {
  j = nlohmann::ordered_json{{"trials", summary.trials},
                     {"identity_failures", summary.identity_failures},
                     {"violations", summary.violations},
                     {"unasserted_violations", summary.unasserted},
                     {"numerical_failures", summary.numerical_failures},
                     {"clean", summary.clean()}};
}

void write_csv_header(std::ostream& os) {
  os << "trial_index,seed,family,a,b,check,mode,lhs_log,rhs_log,margin,holds\n";
}

void write_csv_rows(std::ostream& os, const ScanRecord& record, Mode mode) {
  const std::string prefix = std::to_string(record.trial_index) + "," +
                             std::to_string(record.seed) + "," +
                             std::string(to_string(record.family.kind)) + "," +
                             fmt(record.interval.a()) + "," + fmt(record.interval.b()) + ",";
  if (record.failure) {
    os << prefix << "numerical_failure," << to_string(mode) << ",nan,nan,nan,false\n";
    return;
  }
  for (const auto& id : record.identities) {
    os << prefix << "identity_" << id.identity << ",none," << fmt(id.lhs_log) << ","
       << fmt(id.rhs_log) << "," << fmt(id.tolerance - id.residual) << ","
       << (id.holds ? "true" : "false") << "\n";
  }
  for (const auto& bound : record.bounds) {
    os << prefix << bound.name << "," << to_string(bound.mode) << "," << fmt(bound.lhs_log)
       << "," << fmt(bound.rhs_log) << "," << fmt(bound.margin) << ","
       << (bound.holds ? "true" : "false") << "\n";
  }
}

ScanSummary run_scan(const ScanConfig& cfg, const std::function<void(const ScanRecord&)>& sink) {
  cfg.validate();
  ScanSummary summary;
  std::vector<ScanRecord> block;
  for (long first = 0; first < cfg.n_trials; first += kBlockSize) {
    const long count = std::min(kBlockSize, cfg.n_trials - first);
    block.assign(static_cast<std::size_t>(count), ScanRecord{});
    std::atomic<long> next{0};
    auto worker = [&]() {
      for (long i = next++; i < count; i = next++) {
        const long index = first + i;
        block[static_cast<std::size_t>(i)] =
            run_trial(index, stream_seed(cfg.master_seed, static_cast<std::uint64_t>(index)), cfg);
      }
    };
    const int workers = static_cast<int>(std::min<long>(cfg.jobs, count));
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& record : block) {
      summary.add(record, cfg.mode);
      sink(record);
    }
  }
  return summary;
}

}  // namespace mulcalc::cli
