#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace greenmine::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs the command line in args (program name excluded) and returns the
// process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace greenmine::cli
