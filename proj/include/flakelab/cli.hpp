#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flakelab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAborted = 3;

/// Entry point of the `flakelab` tool. Subcommands: run, classify, estimate,
/// report, sample, oracle. Primary output goes to `out` (or --output).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flakelab
