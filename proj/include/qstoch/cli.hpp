#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qstoch::cli {

enum ExitCode : int { kOk = 0, kLawFailed = 1, kUsage = 2 };

/// Runs the command line `args` (program name excluded). Results go to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 when a verified law fails and
/// 2 for usage, schema or validation errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qstoch::cli
