#pragma once

#include <stdexcept>
#include <string>

namespace rseg {

// Process exit codes. Library errors map onto them 1:1 in the CLI.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_load = 3,
    exit_consistency = 4,
};

// Caller violated a precondition (bad arguments, mismatched shapes, invalid weights).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A file could not be read or failed validation. Messages name the offending
// file and, where applicable, the first offending pixel.
struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accumulators that should describe the same pixel set disagree.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace rseg
