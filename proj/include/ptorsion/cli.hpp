#pragma once

#include <ostream>

namespace ptorsion::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitVerdict = 3;

/// Entry point of the command-line tool. Subcommands: shape, sweep, verify,
/// cheeger, limits, estimate-gamma.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptorsion::cli
