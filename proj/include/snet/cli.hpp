#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace snet::cli {

enum ExitCode : int {
  kOk = 0,
  kDomainFailure = 1,
  kParseFailure = 2,
  kBudget = 3,
  kUsage = 64,
};

/// Runs `snet <subcommand> ...`; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snet::cli
