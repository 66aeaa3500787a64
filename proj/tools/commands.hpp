#pragma once

#include <string>
#include <vector>

namespace fracvia::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitUsage = 64;

/// Runs one invocation; args exclude the program name.
int run(const std::vector<std::string>& args);

}  // namespace fracvia::cli
