#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cjfeast::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out` unless redirected to files; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cjfeast::cli
