#pragma once

#include <ostream>

namespace uavnet {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_validation = 2,  ///< parse, usage or validation error
    exit_numerical = 3,   ///< a numerical procedure failed
};

/// Entry point of the `uavnet` tool; diagnostics go to `err`, tables to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace uavnet
