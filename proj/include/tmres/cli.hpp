// cli.hpp — command-line front end, callable in-process for testing.
#pragma once

#include <string>
#include <vector>

namespace tmres {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNumericalError = 2;
inline constexpr int kExitPartialSweep = 3;

/// Runs one tool invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace tmres
