#pragma once

#include <string>
#include <vector>

namespace ltr::cli {

// Runs one toolkit command. args hold the command line without the program
// name. Returns the process exit code; every failure path prints a one-line
// cause to stderr.
int run(std::vector<std::string> args);

}  // namespace ltr::cli
