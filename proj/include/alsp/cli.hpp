#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alsp::cli {

/// Exit statuses.
inline constexpr int exit_ok      = 0; // success, or verdict SAFE
inline constexpr int exit_error   = 1; // usage, parse or internal error
inline constexpr int exit_attack  = 2;
inline constexpr int exit_unknown = 3;

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace alsp::cli
