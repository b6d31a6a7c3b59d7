#pragma once

#include <ostream>

namespace specsel {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // bad flags, invalid inputs or parameters
inline constexpr int kExitRuntime = 2;  // I/O or numerical failure

/// The `specsel` command-line tool: correlate, regress, autoselect, bench and
/// indices. Output files go under --out with fixed names (see --help).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specsel
