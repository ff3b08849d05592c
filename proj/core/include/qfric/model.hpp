#pragma once

#include "qfric/errors.hpp"

namespace qfric {

// Parameters of a detector moving at constant speed v parallel to a plate at
// height a. Natural units hbar = c = 1.
struct ModelParams {
    double g = 1.0;           // detector-field coupling
    double lambda = 0.01;     // plate-field coupling
    double omega0 = 0.03;     // detector frequency
    double omega_plate = 0.03; // plate oscillator frequency
    double a = 1.0;           // detector height above the plate
    double v = 0.5;           // speed, 0 <= v < 1
    double flight_time = 1.0; // T
    double delta_q0 = 1.0;    // separation of the two branches of the initial state

    double omega0_dimless() const noexcept { return omega0 * a; }
    double omega_plate_dimless() const noexcept { return omega_plate * a; }
};

// Throws ParamOutOfRange naming the first offending field.
void validate(const ModelParams& p);

// Builds parameters from dimensionless frequencies omega*a at height a.
ModelParams with_dimless_frequencies(ModelParams p, double omega0_dimless, double omega_plate_dimless);

}
