#pragma once

// The lamlab command line, as a library so that it can be driven in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace lamlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;     // refuted, malformed input, failed check
inline constexpr int kExitFuel = 2;       // ran out of fuel, indeterminate
inline constexpr int kExitUsage = 64;

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lamlab::cli
