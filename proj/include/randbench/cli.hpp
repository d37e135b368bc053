#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace randbench::cli {

/// Process exit statuses shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    /// A well-formed negative answer: composite, mismatch, no factor found, search exhausted.
    kExitNegative = 1,
    /// Bad flags or invalid input.
    kExitUsage = 2,
    /// An internal invariant failed.
    kExitInternal = 3,
};

/// Runs one command line (without the program name). Result JSON goes to `out`,
/// diagnostics to `err`; `in` is used by the stream protocol subcommands.
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace randbench::cli
