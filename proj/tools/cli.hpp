#pragma once

#include <ostream>
#include <string_view>

namespace chaoslab::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. Results go to `out` (or the --out file),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chaoslab::cli
