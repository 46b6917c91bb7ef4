#pragma once

#include <string>
#include <vector>

namespace robust_lrt::cli {

// Parses argv, runs one subcommand and returns the process exit code:
// 0 success, 2 input error, 3 numeric error.
int run(int argc, const char* const* argv);

inline int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    for (const auto& a: args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace robust_lrt::cli
