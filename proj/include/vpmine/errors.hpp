#pragma once

#include <stdexcept>
#include <string>

namespace vpmine {

/// Malformed or inconsistent input data (parse failures, unknown ids, ...).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when the three partitioning strategies disagree on the final
/// pattern set of a benchmark run. Signals a merge bug, not a data problem.
struct StrategyMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Process exit codes used by the CLI.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitInternal = 3,
};

} // namespace vpmine
