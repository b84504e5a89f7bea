#pragma once

#include <iosfwd>
#include <vector>

namespace nullmodels::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `nullmodels` tool. Subcommands: generate, stats,
// experiment, integrate, sample-limits.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nullmodels::cli
