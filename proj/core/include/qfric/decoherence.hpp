#pragma once

#include "qfric/model.hpp"
#include "qfric/quadrature.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qfric {

// Whether the plate pole k2 = omega0 - omega_plate lies inside the Doppler
// band [-v omega0/(1-v), v omega0/(1+v)].
enum class BranchKind { PoleOutsideBand, PoleInsideBand };

// Derivation: inside iff omega0/(1+v) < omega_plate < omega0/(1-v).
// AsPrinted: the inside form is used iff -omega0/(1+v) < omega_plate < omega0/(1+v).
enum class BranchRule { Derivation, AsPrinted };

const char* to_string(BranchKind kind);
const char* to_string(BranchRule rule);

struct Branch {
    BranchKind kind = BranchKind::PoleOutsideBand; // which closed form is evaluated
    bool pole_in_band = false;                     // geometric fact, independent of the rule
    double k1 = 0.0;
    double k2 = 0.0;
    double k_minus = 0.0;
    double k_plus = 0.0;
};

// Throws BranchBoundaryDegenerate within 1e-9 omega0 of a selection boundary.
Branch select_branch(const ModelParams& p, BranchRule rule = BranchRule::Derivation);

// sin((2a/v) sqrt(P)) / (P ((k + sign*omega0)^2 - omega_plate^2)) with
// P = (k + sign*omega0)^2 v^2 - k^2; sign = -1 or +1.
double band_integrand(const ModelParams& p, double k, int sign);

// Pole-free band sum: both band integrals plus the two exponential terms.
QuadratureResult script_s1(const ModelParams& p, const Tolerance& tol = {});

// Band sum with the pole inside the band: principal values, the cosine term and
// the k1 exponential. Outside the band the principal values reduce to plain
// integrals and the cosine continues to a hyperbolic cosine.
QuadratureResult script_s2(const ModelParams& p, const Tolerance& tol = {});

// Plate-independent part: g^2 dq0^2 T / (16 sqrt(1 - v^2)).
double im_s1_closed(const ModelParams& p);

// The same quantity from its two band integrals, each equal to pi/sqrt(1 - v^2).
QuadratureResult im_s1_numeric(const ModelParams& p, const Tolerance& tol = {});

struct PlateCorrection {
    double im_s2 = 0.0;
    double script_s = 0.0;
    std::optional<Branch> branch; // empty when v = 0 or lambda = 0
    QuadratureResult quadrature;
};

// (g^2 pi^2 dq0^2 lambda^2 T v / 2) times the band sum of the selected branch.
PlateCorrection im_s2(const ModelParams& p, const Tolerance& tol = {}, BranchRule rule = BranchRule::Derivation);

struct DecoherenceResult {
    double t_d = 0.0;
    double global_factor = 0.0; // A = 2/(g^2 dq0^2)
    double t_d_over_a = 0.0;    // t_d / A
    double rate_bracket = 0.0;  // 1/(8 sqrt(1-v^2)) + lambda^2 v S
    double im_s1 = 0.0;
    double im_s2 = 0.0;
    double script_s = 0.0;
    std::optional<Branch> branch;
    QuadratureResult quadrature;
};

// t_d = A / [1/(8 sqrt(1-v^2)) + lambda^2 v S]; throws NonpositiveDenominator
// when the bracket is not positive. Requires g > 0.
DecoherenceResult decoherence_time(const ModelParams& p, const Tolerance& tol = {},
                                   BranchRule rule = BranchRule::Derivation);

// Band sums on either side of the lower selection boundary
// omega_plate = omega0/(1+v): the pole-free form at (1 - offset) times the
// boundary and the pole-in-band form at (1 + offset) times it. Requires v > 0.
struct BranchJump {
    double boundary = 0.0; // omega_plate at the boundary
    double offset = 0.0;
    double s_below = 0.0;
    double s_above = 0.0;
    double jump = 0.0; // |s_above - s_below|
};
BranchJump branch_jump(const ModelParams& p, double offset = 1e-6, const Tolerance& tol = {});

enum class SweepAxis { Velocity, PlateFrequency };

struct SweepPoint {
    double x = 0.0;
    std::optional<DecoherenceResult> result;
    std::string status = "ok"; // error kind name when the point failed
    std::string message;
};

struct DecoherenceSweep {
    double global_factor = 0.0;
    SweepAxis axis = SweepAxis::Velocity;
    std::vector<SweepPoint> points;
};

// Velocity axis: x is v. PlateFrequency axis: x is omega_plate*a.
// Parameter errors abort the sweep; numerical failures are recorded per point.
DecoherenceSweep t_d_sweep(const ModelParams& base, SweepAxis axis, std::span<const double> grid,
                           const Tolerance& tol = {}, BranchRule rule = BranchRule::Derivation);

}
