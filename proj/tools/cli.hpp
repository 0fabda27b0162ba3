#pragma once

#include "output_record.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace lcsharp::cli {

enum ExitCode : int { exit_ok = 0, exit_violated = 1, exit_usage = 2 };

/// Runs one command line (without the program name). The JSON record goes to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lcsharp::cli
