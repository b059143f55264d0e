#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ordmet {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  exit_ok = 0,          // all rows pass, or the solver produced an endpoint certificate
  exit_failure = 1,     // a check failed, or the solver ran out of budget
  exit_hypothesis = 2,  // a hypothesis or order error stopped the computation
  exit_usage = 3,       // unreadable instance file or bad flags
};

/// Subcommands: list, verify, solve, hausdorff, export. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordmet
