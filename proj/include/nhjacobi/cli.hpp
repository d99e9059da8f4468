#pragma once

// Command dispatch behind the `nhjacobi` executable. Kept in the library so
// tests can drive it with string streams.

#include <iosfwd>

#include "nhjacobi/io.hpp"

namespace nhj {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitNumerical = 3 };

// Executes a parsed configuration. Payload goes to `out` unless cfg.out names
// a file. Throws the library's errors; run_cli maps them to exit codes.
int run_command(const RunConfig& cfg, std::ostream& out);

// parse_args + run_command with errors reported on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nhj
