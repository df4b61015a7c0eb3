#pragma once

#include <iosfwd>

namespace sptetris {

/// Exit codes shared by every command.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,      // usage, I/O, parse errors and trace mismatches
    kExitInfeasible = 2, // not ready, construction stuck, degenerate input
    kExitBudget = 3,     // search stopped by its node budget
};

/// Entry point of the `sptetris` tool, with the output streams injectable
/// for in-process testing.
int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

} // namespace sptetris
