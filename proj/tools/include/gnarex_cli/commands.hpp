#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gnarex::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInputError = 2,
    kNumericError = 3,
    kRankDeficient = 4,
};

// Parses `args` (without the program name) and runs one subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gnarex::cli
