#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mulcalc::cli {

enum ExitCode : int { kPass = 0, kViolation = 1, kUsage = 2, kNumericalFailure = 3 };

/// Entry point of the `mulcalc` tool. `args` excludes the program name.
/// Reports go to `out`, diagnostics and the scan summary to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mulcalc::cli
