#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mulcalc/bounds.hpp"
#include "mulcalc/functions.hpp"
#include "mulcalc/identities.hpp"

namespace mulcalc::cli {

enum class OutputFormat { json_lines, csv };

OutputFormat parse_output_format(std::string_view text);

struct ScanConfig {
  std::uint64_t master_seed = 0;
  long n_trials = 0;
  Mode mode = Mode::strict;
  bool nonneg_star = true;
  int n_hinges = 3;
  QuadratureConfig quad;
  int jobs = 1;
  /// Trial intervals are drawn inside this range.
  double range_lo = 0.0;
  double range_hi = 3.0;
  double min_width = 0.05;

  void validate() const;
};

/// One randomized trial. Everything in it is a function of `seed` and the
/// config, so a trial can be rerun standalone from its seed.
struct ScanRecord {
  long trial_index = 0;
  std::uint64_t seed = 0;
  FamilySpec family;
  Interval interval{0.0, 1.0};
  std::vector<IdentityReport> identities;
  std::vector<BoundReport> bounds;
  /// Set when the trial hit a numerical failure; reports are then empty.
  std::optional<std::string> failure;
  double wall_time_ms = 0.0;
};

ScanRecord run_trial(long trial_index, std::uint64_t seed, const ScanConfig& cfg);

/// Counts accumulated over a scan.
///
/// Asserted checks: every identity, both Hermite-Hadamard halves, and the
/// strict-mode theorem bounds; a bound is only asserted when its sampled
/// hypothesis held. Robust-mode bounds and out-of-hypothesis failures are
/// tallied under `unasserted`.
struct ScanSummary {
  long trials = 0;
  std::map<std::string, long> identity_failures;
  std::map<std::string, long> violations;
  std::map<std::string, long> unasserted;
  long numerical_failures = 0;

  void add(const ScanRecord& record, Mode mode);
  bool clean() const;
};

void to_json(nlohmann::ordered_json& j, const ScanRecord& record);
void to_json(nlohmann::ordered_json& j, const ScanSummary& summary);

/// CSV header and rows; one row per identity and per bound.
void write_csv_header(std::ostream& os);
void write_csv_rows(std::ostream& os, const ScanRecord& record, Mode mode);

/// Runs trials 0..n_trials-1 on `cfg.jobs` workers and hands records to
/// `sink` in trial order, in blocks.
ScanSummary run_scan(const ScanConfig& cfg, const std::function<void(const ScanRecord&)>& sink);

}  // namespace mulcalc::cli
