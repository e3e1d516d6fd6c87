#pragma once

#include <string>
#include <vector>

namespace censorlens::app {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kMissingDependency = 2,
  kRuntimeFailure = 3,
};

/// Parses arguments (argv[0] is the program name) and runs one subcommand.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace censorlens::app
