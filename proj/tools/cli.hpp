#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nhscat::cli {

enum ExitCode : int { ok = 0, input_error = 1, numerical_error = 2, verification_failed = 3 };

/// Run one `nhscat` invocation. `args` excludes the program name. Normal
/// output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nhscat::cli
