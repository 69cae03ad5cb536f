#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace amass::cli {

/// Exit codes of every subcommand.
enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Entry point of the `cctld-amass` tool. `argv[0]` is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amass::cli
