#pragma once

#include <string>
#include <vector>

// Command-line entry point. Exit codes: 0 success, 1 usage/config error,
// 2 verification failure.
namespace spinmech::cli {

int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace spinmech::cli
