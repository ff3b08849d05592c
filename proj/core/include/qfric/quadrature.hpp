#pragma once

#include "qfric/errors.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace qfric {

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-14;
    std::size_t max_subdivisions = 20000;
};

using Integrand = std::function<double(double)>;

// Integrand told the exact distances of x from lo and hi; near a substituted
// edge the distance is u^2 itself rather than a difference of nearby numbers.
using EdgeIntegrand = std::function<double(double x, double to_lo, double to_hi)>;

// Integrable |x - edge|^(-1/2) behaviour at the flagged ends.
struct EndpointInvSqrt {
    bool at_lo = false;
    bool at_hi = false;
};

// Simple pole inside (lo, hi); the integral is taken as a principal value.
struct SimplePole {
    double location = 0.0;
};

using Singularity = std::variant<EndpointInvSqrt, SimplePole>;

// With a SimplePole the callable is the numerator h and the integrand is
// h(x) / (x - pole). At most one pole is supported.
struct IntegrandSpec {
    Integrand f;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<Singularity> singularities;
};

QuadratureResult integrate(const IntegrandSpec& spec, const Tolerance& tol = {});

// Globally adaptive 7/15-point Gauss-Kronrod with bisection of the worst panel.
QuadratureResult integrate_adaptive(const Integrand& f, double lo, double hi, const Tolerance& tol = {});

// Substitutes x = edge +- u^2 at flagged ends, falling back to tanh-sinh.
QuadratureResult integrate_endpoint_invsqrt(const Integrand& f, double lo, double hi, EndpointInvSqrt ends,
                                            const Tolerance& tol = {});
QuadratureResult integrate_endpoint_invsqrt(const EdgeIntegrand& f, double lo, double hi, EndpointInvSqrt ends,
                                            const Tolerance& tol = {});

// Interval [lo, lo + width] given by its exact width.
QuadratureResult integrate_endpoint_invsqrt_span(const EdgeIntegrand& f, double lo, double width, EndpointInvSqrt ends,
                                                 const Tolerance& tol = {});

// PV of h(x)/(x - pole) by subtracting h(pole) and adding its logarithmic integral.
QuadratureResult cauchy_pv(const Integrand& h, double pole, double lo, double hi, const Tolerance& tol = {},
                           EndpointInvSqrt ends = {});
QuadratureResult cauchy_pv(const EdgeIntegrand& h, double pole, double lo, double hi, const Tolerance& tol = {},
                           EndpointInvSqrt ends = {});

// Pole at lo + left and upper end at lo + left + right. Distances handed to h
// and the subtracted pole factor are built from left and right directly.
QuadratureResult cauchy_pv_span(const EdgeIntegrand& h, double lo, double left, double right, const Tolerance& tol = {},
                                EndpointInvSqrt ends = {});

// PV of f over [centre - half_width, centre + half_width] when f has a simple
// pole of unknown residue at centre, by folding the two halves together.
// Offsets are rounded so that centre + u and centre - u are both exact.
QuadratureResult fold_pv(const Integrand& f, double centre, double half_width, const Tolerance& tol = {});

// Double-exponential rule on [lo, hi]; tolerates integrable endpoint singularities.
QuadratureResult integrate_tanh_sinh(const Integrand& f, double lo, double hi, const Tolerance& tol = {});

// Vector-valued integrand: writes dim components for abscissa x into out.
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

struct VectorQuadratureResult {
    std::vector<double> value;
    double abs_error = 0.0; // bound on the largest component error
    std::size_t n_evals = 0;
};

// Adaptive Gauss-Kronrod on a vector integrand sharing one subdivision; the
// error target is relative to the largest component magnitude.
VectorQuadratureResult integrate_adaptive_vector(const VectorIntegrand& f, std::size_t dim, double lo, double hi,
                                                 const Tolerance& tol = {});

}
