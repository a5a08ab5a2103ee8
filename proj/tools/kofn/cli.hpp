#pragma once

#include <string>
#include <vector>

namespace kofn::cli {

// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace kofn::cli
