#pragma once

#include "qfric/model.hpp"

#include <span>
#include <vector>

namespace qfric {

// Imaginary part of the influence action of the plate on the detector for a
// flight of duration T, at second order in lambda. Frequencies enter through
// their dimensionless forms omega*a. The value carries all of its physical
// factors; divide by g^2 for the normalisation used in friction plots.
struct FrictionResult {
    double im_gamma = 0.0;
    ModelParams params;
};

FrictionResult im_effective_action(const ModelParams& p);

struct FrictionPoint {
    double v = 0.0;
    double im_gamma = 0.0;
};

// Evaluates im_effective_action along v_grid with all other parameters fixed.
// Every grid value is validated before any evaluation.
std::vector<FrictionPoint> friction_curve(const ModelParams& base, std::span<const double> v_grid);

// Resonant case omega0 = omega_plate = omega, written out in its own reduced form.
double two_plate_reference(double flight_time, double v, double lambda, double g, double omega_dimless);

}
