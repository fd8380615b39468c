#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace impmatch::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitIo = 3;

/// Parses `args` (without the program name) and runs the subcommand.
/// Diagnostics go to `err`, informational output to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace impmatch::cli
