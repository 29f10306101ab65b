#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ruslan::cli {

/// Process exit codes. The numbers are part of the scripting contract.
enum ExitStatus : int {
  kOk = 0,
  kFindings = 1,
  kUsage = 2,
  kDataError = 3,
  kInternal = 4,
};

/// Runs one command line. `args` excludes the program name; data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ruslan::cli
