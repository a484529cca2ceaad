#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ltpal {

/// Exit codes of the command line tool.
enum ExitCode : int {
  kExitTrue = 0,       // verdict true / success
  kExitFalse = 1,      // verdict false
  kExitUsage = 2,      // usage, I/O or input error
  kExitUndecided = 3,  // path cap reached before a verdict
};

/// Runs the `ltpal` command line (args[0] is the program name). Results go
/// to `out` as JSON, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ltpal
