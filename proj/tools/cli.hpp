#pragma once

#include <iosfwd>

namespace lapflow::cli {

/// Exit codes of the `lapflow` command.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kParseError = 2;
inline constexpr int kAnalysisError = 3;

/// Runs the command line in-process; `out`/`err` replace stdout/stderr.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lapflow::cli
