#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frametight::cli {

enum ExitCode : int { kOk = 0, kError = 1, kNotConverged = 2, kViolated = 2, kNotAFrame = 3 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace frametight::cli
