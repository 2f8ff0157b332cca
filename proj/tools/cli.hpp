#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bfly::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // parse errors, unreadable input, other errors
inline constexpr int kExitUsage = 2;    // bad flags or flag combinations
inline constexpr int kExitResource = 3;

// Environment variable holding the default worker count (0 = all cores).
inline constexpr const char* kThreadsEnv = "BFLY_THREADS";

// Runs one command line (args excludes the program name). Results go to out
// unless --out is given; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bfly::cli
