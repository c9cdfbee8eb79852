#pragma once

#include <iosfwd>

namespace dsm::bench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSpecError = 1;
inline constexpr int kExitRowFailures = 2;

/// Entry point of dsm-bench. Subcommands: run, sweep-q, export-problem.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dsm::bench
