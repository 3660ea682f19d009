#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oddcycle {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // the run completed but its analytic goal failed
inline constexpr int kExitUsage = 2;    // bad arguments, config or input files

// Entry point behind the `oddcycle` binary. `args` excludes the program name.
// Reports go to `out` (or the --output file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oddcycle
