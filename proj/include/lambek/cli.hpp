#pragma once

// Command-line front end. Exit codes: 0 verdict computed, 1 negative
// verdict (mismatch, refutation or witness found), 2 usage error, 3 budget
// exhausted.

#include <iosfwd>
#include <string>
#include <vector>

namespace lambek {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lambek
