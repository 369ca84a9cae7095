#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covnet::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;     // bad flags, unknown subcommand
inline constexpr int kExitSchema = 3;    // config or model file rejected
inline constexpr int kExitIo = 4;        // unreadable input, unwritable output
inline constexpr int kExitRuntime = 5;   // numerical or argument errors while running
inline constexpr int kExitCheck = 6;     // an oracle or bound check failed

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covnet::cli
