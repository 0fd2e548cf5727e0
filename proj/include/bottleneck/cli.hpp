#pragma once

#include <iosfwd>

namespace bottleneck {

/// Exit codes of the command-line tool.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kNoConvergence = 2;
inline constexpr int kRateMismatch = 3;
} // namespace exit_code

/// Entry point of the `bottleneck_cli` tool: subcommands run, spue,
/// stability and demo-config.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bottleneck
