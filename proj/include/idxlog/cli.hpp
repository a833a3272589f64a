#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idxlog {

/// Exit codes: 0 success or true, 1 false (eval, run-*, check), 2 usage,
/// 3 input error, 4 resource limit.
enum ExitCode : int { kExitTrue = 0, kExitFalse = 1, kExitUsage = 2, kExitInput = 3, kExitLimit = 4 };

/// Runs one command line; args excludes the program name. IDXLOG_MAX_STEPS and
/// IDXLOG_MAX_SPACE override the default machine limits.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idxlog
