#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polygrowth {

inline constexpr int kReportFormatVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitVerification = 2, kExitExhausted = 3 };

/// Parses `args` (without the program name) and runs one subcommand.  Reports
/// go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polygrowth
