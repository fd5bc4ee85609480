#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpolar::cli {

// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

// Runs the command line `args` (without the program name). JSON and CSV go to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rpolar::cli
