#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gr1kit::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kStrategyHole = 3,
  kCheckFailed = 4,
  kCapacity = 5,
  kUnrealizable = 10,
};

/// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace gr1kit::cli
