#pragma once

#include <string>
#include <vector>

namespace qfric::cli {

// "min:max:count" with an optional ":log" or ":linear" suffix.
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;
    bool log = false;
};

// Throws qfric::ParamOutOfRange on malformed text, count < 1, min >= max with
// count > 1, or a log grid with min <= 0.
GridSpec parse_grid(const std::string& text, const std::string& field);

// Endpoints are exact; count 1 gives {min}.
std::vector<double> expand(const GridSpec& g);

std::string to_string(const GridSpec& g);

}
