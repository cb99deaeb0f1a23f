#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace halflin::cli {

/// Runs the command-line tool on `args` (excluding the program name).
/// Results go to `out` when the configured destination is "-", diagnostics
/// and error messages to `err`.
///
/// Exit codes: 0 success, 1 configuration error (bad flags, bad config file,
/// unrecognized or ill-typed keys), 2 numeric failure (overflow, divergence,
/// truncation, instability), 3 the fixed-point iteration did not converge
/// within its budget (diagnostics are still written).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace halflin::cli
