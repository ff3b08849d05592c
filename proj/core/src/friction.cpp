#include "qfric/friction.hpp"

#include <cmath>

namespace qfric {

FrictionResult im_effective_action(const ModelParams& p)
{
    validate(p);
    FrictionResult out{0.0, p};
    if (p.v == 0.0 || p.lambda == 0.0 || p.g == 0.0)
        return out;
    const double w0 = p.omega0_dimless();
    const double wp = p.omega_plate_dimless();
    if (wp == 0.0)
        throw Error(ErrorKind::DegenerateDenominator, "plate frequency must be positive when v > 0");
    const double sum = w0 + wp;
    const double y = sum * sum - p.v * p.v * wp * wp;
    const double pre = p.flight_time * p.v * M_PI * p.lambda * p.lambda * p.g * p.g / (32.0 * wp * w0);
    out.im_gamma = pre * std::exp(-(2.0 / p.v) * std::sqrt(y)) / y;
    return out;
}

std::vector<FrictionPoint> friction_curve(const ModelParams& base, std::span<const double> v_grid)
{
    for (double v : v_grid) {
        ModelParams p = base;
        p.v = v;
        validate(p);
    }
    std::vector<FrictionPoint> out;
    out.reserve(v_grid.size());
    for (double v : v_grid) {
        ModelParams p = base;
        p.v = v;
        out.push_back({v, im_effective_action(p).im_gamma});
    }
    return out;
}

double two_plate_reference(double flight_time, double v, double lambda, double g, double omega_dimless)
{
    if (v == 0.0)
        return 0.0;
    const double w2 = omega_dimless * omega_dimless;
    const double q = 4.0 - v * v;
    return flight_time * v * M_PI * lambda * lambda * g * g / (32.0 * w2)
        * std::exp(-(2.0 * omega_dimless / v) * std::sqrt(q)) / (w2 * q);
}

}
