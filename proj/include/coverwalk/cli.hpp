#pragma once

#include <string>
#include <vector>

namespace coverwalk {

// Outcome of one CLI invocation. `out` carries the JSON report (already
// newline-terminated), `err` carries diagnostics and --pretty tables.
// Exit codes: 0 success, 1 a mathematical check failed (report still in
// `out`), 2 usage or input error.
struct CommandResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

// Run one invocation, argv without the program name. Never throws; all
// errors are folded into the exit code and `err`.
CommandResult dispatch(const std::vector<std::string>& args);

}  // namespace coverwalk
