#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vkoga::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kNumericalError = 2 };

/// Runs one invocation of the command-line tool. args excludes the program
/// name. Output files written before a failure are removed again.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vkoga::cli
