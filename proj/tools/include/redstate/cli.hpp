#pragma once

// Command-line front end. Exit codes:
//   0  success, or the queried predicate holds
//   1  predicate false, or the input is infeasible for the requested construction
//   2  usage or file-format error
//   3  numerical validation failure (not Hermitian, not PSD, bad trace, ...)

#include <iosfwd>
#include <string>
#include <vector>

namespace redstate::cli {

enum ExitCode : int { ok = 0, negative = 1, usage = 2, invalid = 3 };

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace redstate::cli
