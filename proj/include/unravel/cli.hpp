#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unravel {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitViolation = 2 };

/// Runs the command line; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unravel
