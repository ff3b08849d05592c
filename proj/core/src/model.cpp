#include "qfric/model.hpp"

#include <cmath>

namespace qfric {

namespace {

void require(bool ok, const char* field, double value, const char* allowed)
{
    if (!ok || !std::isfinite(value))
        throw ParamOutOfRange(field, value, allowed);
}

}

void validate(const ModelParams& p)
{
    require(p.g >= 0.0, "g", p.g, "[0, inf)");
    require(p.lambda >= 0.0, "lambda", p.lambda, "[0, inf)");
    require(p.omega0 > 0.0, "omega0", p.omega0, "(0, inf)");
    require(p.omega_plate >= 0.0, "omega_plate", p.omega_plate, "[0, inf)");
    require(p.a > 0.0, "a", p.a, "(0, inf)");
    require(p.v >= 0.0 && p.v < 1.0, "v", p.v, "[0, 1)");
    require(p.flight_time > 0.0, "flight_time", p.flight_time, "(0, inf)");
    require(p.delta_q0 > 0.0, "delta_q0", p.delta_q0, "(0, inf)");
}

ModelParams with_dimless_frequencies(ModelParams p, double omega0_dimless, double omega_plate_dimless)
{
    p.omega0 = omega0_dimless / p.a;
    p.omega_plate = omega_plate_dimless / p.a;
    return p;
}

}
