#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace voi {

// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_invalid_model = 1,
    exit_usage = 2,
    exit_computation = 3,
};

// Runs the tool with argv-style arguments (args[0] is the program name).
// Errors go to `err` as "error[CODE]: message".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace voi
