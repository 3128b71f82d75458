#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smdpde::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitDegenerate = 3,
  kExitNumeric = 4,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless redirected by --output; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smdpde::cli
