#pragma once

// Command-line front end. run_cli takes argv-style arguments (args[0] is the
// program name) and returns the process exit code.

#include <ostream>
#include <string>
#include <vector>

namespace zcycles::cli {

enum ExitCode : int {
    kPass = 0,
    kUsage = 1,
    kInconclusive = 2,
    kContradiction = 3,  // a finding that contradicts a proven statement
    kViolated = 4,       // the checked condition does not hold for the input
};

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zcycles::cli
