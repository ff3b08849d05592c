#include "grid.hpp"

#include "qfric/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qfric::cli {

namespace {

double number(const std::string& s, const std::string& field)
{
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(x))
        throw ParamOutOfRange(field, std::numeric_limits<double>::quiet_NaN(), "min:max:count[:log|:linear]");
    return x;
}

}

GridSpec parse_grid(const std::string& text, const std::string& field)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');)
        parts.push_back(p);
    if (parts.size() < 3 || parts.size() > 4)
        throw ParamOutOfRange(field, std::numeric_limits<double>::quiet_NaN(), "min:max:count[:log|:linear]");
    GridSpec g;
    g.min = number(parts[0], field);
    g.max = number(parts[1], field);
    const double count = number(parts[2], field);
    if (count < 1.0 || count != std::floor(count) || count > 1e7)
        throw ParamOutOfRange(field + ".count", count, "integer in [1, 1e7]");
    g.count = static_cast<std::size_t>(count);
    if (parts.size() == 4) {
        if (parts[3] == "log")
            g.log = true;
        else if (parts[3] != "linear")
            throw ParamOutOfRange(field + ".spacing", std::numeric_limits<double>::quiet_NaN(), "log or linear");
    }
    if (g.count > 1 && !(g.min < g.max))
        throw ParamOutOfRange(field + ".max", g.max, "greater than min");
    if (g.log && !(g.min > 0.0))
        throw ParamOutOfRange(field + ".min", g.min, "(0, inf) for a log grid");
    return g;
}

std::vector<double> expand(const GridSpec& g)
{
    std::vector<double> x(g.count);
    if (g.count == 1) {
        x[0] = g.min;
        return x;
    }
    const double n = static_cast<double>(g.count - 1);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double t = static_cast<double>(i) / n;
        x[i] = g.log ? std::exp(std::log(g.min) + t * (std::log(g.max) - std::log(g.min)))
                     : g.min + t * (g.max - g.min);
    }
    x.back() = g.max;
    return x;
}

std::string to_string(const GridSpec& g)
{
    std::ostringstream os;
    os.precision(17);
    os << g.min << ':' << g.max << ':' << g.count << ':' << (g.log ? "log" : "linear");
    return os.str();
}

}
