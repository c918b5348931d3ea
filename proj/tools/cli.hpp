#pragma once

// Command-line front end. Exit codes: 0 success, 1 evaluation or verification
// failure, 2 usage, parse or configuration error.

#include <ostream>
#include <string>
#include <vector>

namespace isocurv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isocurv::cli
