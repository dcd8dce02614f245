#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cwm/ranks.hpp"

namespace cwm::cli {

enum ExitCode : int { kSuccess = 0, kInternalError = 1, kUsageError = 2 };

/// Runs the command line `args` (without the program name) and returns the
/// process exit code. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads an n x d numeric matrix. A first row that does not parse as numbers is
/// treated as a header; blank lines are skipped; rows of the wrong arity and
/// non-numeric cells raise InputError.
Sample read_sample_csv(std::istream& in);

}  // namespace cwm::cli
