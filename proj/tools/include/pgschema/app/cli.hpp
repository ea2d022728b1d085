#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pgschema::app {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitIncompatible = 3;
inline constexpr int kExitCheckFailed = 4;  // validate found violations, fmt --check found drift

// Runs one subcommand. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgschema::app
