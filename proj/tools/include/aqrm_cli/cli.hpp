#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aqrm::cli {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace aqrm::cli
