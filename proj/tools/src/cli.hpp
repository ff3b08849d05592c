#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qfric::cli {

// Exit codes.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

// Runs the command line given as arguments after the program name. Results go
// to the files named on the command line; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}
