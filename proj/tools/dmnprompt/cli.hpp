#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmnprompt::cli {

enum ExitCode : int {
  kOk = 0,
  kDomainFailure = 1,  // validation, evaluation, labels
  kInputFailure = 2,   // unreadable or malformed input, bad flags
  kBackendFailure = 3, // LLM backend errors
};

/// Runs one command line. `args` excludes the program name. Only `run`
/// talks to the network.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace dmnprompt::cli
