#include "qfric/decoherence.hpp"

#include "qfric/parallel.hpp"

#include <cmath>
#include <sstream>

namespace qfric {

namespace {

struct Band {
    double lo;
    double hi;
};

Band band(const ModelParams& p, int sign)
{
    const double v = p.v;
    const double w0 = p.omega0;
    if (sign < 0)
        return {-v * w0 / (1.0 - v), v * w0 / (1.0 + v)};
    return {-v * w0 / (1.0 + v), v * w0 / (1.0 - v)};
}

double band_quadratic(const ModelParams& p, const Band& b, double k)
{
    return (1.0 - p.v * p.v) * (k - b.lo) * (b.hi - k);
}

void require_plate_frequency(const ModelParams& p)
{
    if (!(p.omega_plate > 0.0))
        throw Error(ErrorKind::DegenerateDenominator, "band sums need a positive plate frequency");
    if (!(p.v > 0.0))
        throw Error(ErrorKind::DegenerateDenominator, "band sums need v > 0");
}

double exp_term(const ModelParams& p, double w)
{
    const double y = w * w - p.v * p.v * p.omega_plate * p.omega_plate;
    if (!(y > 0.0))
        throw Error(ErrorKind::DegenerateDenominator, "exponential term has a non-positive radicand");
    return std::exp(-(2.0 * p.a / p.v) * std::sqrt(y)) / (2.0 * p.omega_plate * y);
}

QuadratureResult plain_band(const ModelParams& p, int sign, const Tolerance& tol)
{
    const Band b = band(p, sign);
    const double c = 2.0 * p.a / p.v;
    const double shift = sign * p.omega0;
    const double wp2 = p.omega_plate * p.omega_plate;
    QuadratureResult r = integrate_endpoint_invsqrt(
        [&](double k, double to_lo, double to_hi) {
            const double q = (1.0 - p.v * p.v) * to_lo * to_hi;
            const double s = k + shift;
            return std::sin(c * std::sqrt(q)) / (q * (s * s - wp2));
        },
        b.lo, b.hi, {true, true}, tol);
    r.value /= 2.0 * M_PI;
    r.abs_error /= 2.0 * M_PI;
    return r;
}

QuadratureResult pv_band(const ModelParams& p, int sign, const Tolerance& tol)
{
    const Band b = band(p, sign);
    const double c = 2.0 * p.a / p.v;
    const double k1 = p.omega0 + p.omega_plate;
    const double k2 = p.omega0 - p.omega_plate;
    const double pole = -sign * k2;
    const double other = -sign * k1;
    QuadratureResult r = cauchy_pv(
        [&](double k, double to_lo, double to_hi) {
            const double q = (1.0 - p.v * p.v) * to_lo * to_hi;
            return std::sin(c * std::sqrt(q)) / (q * (k - other));
        },
        pole, b.lo, b.hi, tol, {true, true});
    r.value /= 2.0 * M_PI;
    r.abs_error /= 2.0 * M_PI;
    return r;
}

QuadratureResult combine(const QuadratureResult& x, const QuadratureResult& y, double extra)
{
    return {x.value + y.value + extra, x.abs_error + y.abs_error, x.n_evals + y.n_evals};
}

std::string boundary_message(double wp, double edge)
{
    std::ostringstream os;
    os.precision(17);
    os << "plate frequency " << wp << " within 1e-9 omega0 of the branch boundary " << edge;
    return os.str();
}

}

const char* to_string(BranchKind kind)
{
    return kind == BranchKind::PoleInsideBand ? "PoleInsideBand" : "PoleOutsideBand";
}

const char* to_string(BranchRule rule)
{
    return rule == BranchRule::AsPrinted ? "as_printed" : "derivation";
}

Branch select_branch(const ModelParams& p, BranchRule rule)
{
    validate(p);
    const double lower = p.omega0 / (1.0 + p.v);
    const double upper = p.omega0 / (1.0 - p.v);
    for (double edge : {lower, upper}) {
        if (std::abs(p.omega_plate - edge) < 1e-9 * p.omega0)
            throw Error(ErrorKind::BranchBoundaryDegenerate, boundary_message(p.omega_plate, edge));
    }
    Branch out;
    out.k1 = p.omega0 + p.omega_plate;
    out.k2 = p.omega0 - p.omega_plate;
    out.k_minus = -p.v * p.omega0 / (1.0 - p.v);
    out.k_plus = p.v * p.omega0 / (1.0 + p.v);
    out.pole_in_band = lower < p.omega_plate && p.omega_plate < upper;
    const bool inside_form = rule == BranchRule::Derivation ? out.pole_in_band
                                                            : (-lower < p.omega_plate && p.omega_plate < lower);
    out.kind = inside_form ? BranchKind::PoleInsideBand : BranchKind::PoleOutsideBand;
    return out;
}

double band_integrand(const ModelParams& p, double k, int sign)
{
    const Band b = band(p, sign);
    const double q = band_quadratic(p, b, k);
    const double s = k + sign * p.omega0;
    return std::sin((2.0 * p.a / p.v) * std::sqrt(q)) / (q * (s * s - p.omega_plate * p.omega_plate));
}

QuadratureResult script_s1(const ModelParams& p, const Tolerance& tol)
{
    validate(p);
    require_plate_frequency(p);
    const double tail = exp_term(p, p.omega0 + p.omega_plate) + exp_term(p, p.omega0 - p.omega_plate);
    return combine(plain_band(p, -1, tol), plain_band(p, +1, tol), tail);
}

QuadratureResult script_s2(const ModelParams& p, const Tolerance& tol)
{
    validate(p);
    require_plate_frequency(p);
    const double wp = p.omega_plate;
    const double y = p.v * p.v * wp * wp - (p.omega0 - wp) * (p.omega0 - wp);
    if (y == 0.0)
        throw Error(ErrorKind::DegenerateDenominator, "cosine term has a vanishing denominator");
    const double c = 2.0 * p.a / p.v;
    const double trig = y > 0.0 ? std::cos(c * std::sqrt(y)) : std::cosh(c * std::sqrt(-y));
    const double tail = -trig / (2.0 * wp * y) + exp_term(p, p.omega0 + wp);
    if (y > 0.0)
        return combine(pv_band(p, -1, tol), pv_band(p, +1, tol), tail);
    return combine(plain_band(p, -1, tol), plain_band(p, +1, tol), tail);
}

double im_s1_closed(const ModelParams& p)
{
    validate(p);
    return p.g * p.g * p.delta_q0 * p.delta_q0 * p.flight_time / (16.0 * std::sqrt(1.0 - p.v * p.v));
}

QuadratureResult im_s1_numeric(const ModelParams& p, const Tolerance& tol)
{
    validate(p);
    const double s = 1.0 - p.v * p.v;
    auto half = [&](double lo, double hi) {
        return integrate_endpoint_invsqrt(
            [&](double, double to_lo, double to_hi) { return 1.0 / std::sqrt(s * to_lo * to_hi); }, lo, hi, {true, true},
            tol);
    };
    const QuadratureResult first = half(-p.omega0 / (1.0 + p.v), p.omega0 / (1.0 - p.v));
    const QuadratureResult second = half(-p.omega0 / (1.0 - p.v), p.omega0 / (1.0 + p.v));
    const double pre = p.g * p.g * p.delta_q0 * p.delta_q0 * p.flight_time / (32.0 * M_PI);
    return {pre * (first.value + second.value), pre * (first.abs_error + second.abs_error),
            first.n_evals + second.n_evals};
}

PlateCorrection im_s2(const ModelParams& p, const Tolerance& tol, BranchRule rule)
{
    validate(p);
    PlateCorrection out;
    if (p.v == 0.0 || p.lambda == 0.0)
        return out;
    const Branch br = select_branch(p, rule);
    out.branch = br;
    out.quadrature = br.kind == BranchKind::PoleInsideBand ? script_s2(p, tol) : script_s1(p, tol);
    out.script_s = out.quadrature.value;
    const double pre = p.g * p.g * M_PI * M_PI * p.delta_q0 * p.delta_q0 * p.lambda * p.lambda * p.flight_time * p.v / 2.0;
    out.im_s2 = pre * out.script_s;
    return out;
}

DecoherenceResult decoherence_time(const ModelParams& p, const Tolerance& tol, BranchRule rule)
{
    validate(p);
    if (!(p.g > 0.0))
        throw ParamOutOfRange("g", p.g, "(0, inf) for a finite decoherence time");
    DecoherenceResult out;
    const PlateCorrection plate = im_s2(p, tol, rule);
    out.global_factor = 2.0 / (p.g * p.g * p.delta_q0 * p.delta_q0);
    out.im_s1 = im_s1_closed(p);
    out.im_s2 = plate.im_s2;
    out.script_s = plate.script_s;
    out.branch = plate.branch;
    out.quadrature = plate.quadrature;
    out.rate_bracket = 1.0 / (8.0 * std::sqrt(1.0 - p.v * p.v)) + p.lambda * p.lambda * p.v * plate.script_s;
    if (!(out.rate_bracket > 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "decoherence rate bracket " << out.rate_bracket << " is not positive";
        throw Error(ErrorKind::NonpositiveDenominator, os.str());
    }
    out.t_d_over_a = 1.0 / out.rate_bracket;
    out.t_d = out.global_factor * out.t_d_over_a;
    return out;
}

BranchJump branch_jump(const ModelParams& p, double offset, const Tolerance& tol)
{
    validate(p);
    if (!(offset > 0.0 && offset < 1.0))
        throw ParamOutOfRange("offset", offset, "(0, 1)");
    require_plate_frequency(p);
    BranchJump out;
    out.boundary = p.omega0 / (1.0 + p.v);
    out.offset = offset;
    ModelParams below = p;
    below.omega_plate = out.boundary * (1.0 - offset);
    ModelParams above = p;
    above.omega_plate = out.boundary * (1.0 + offset);
    out.s_below = script_s1(below, tol).value;
    out.s_above = script_s2(above, tol).value;
    out.jump = std::abs(out.s_above - out.s_below);
    return out;
}

DecoherenceSweep t_d_sweep(const ModelParams& base, SweepAxis axis, std::span<const double> grid,
                           const Tolerance& tol, BranchRule rule)
{
    auto at = [&](double x) {
        ModelParams p = base;
        if (axis == SweepAxis::Velocity)
            p.v = x;
        else
            p.omega_plate = x / p.a;
        return p;
    };
    for (double x : grid)
        validate(at(x));
    if (!(base.g > 0.0))
        throw ParamOutOfRange("g", base.g, "(0, inf) for a finite decoherence time");
    DecoherenceSweep out;
    out.axis = axis;
    out.global_factor = 2.0 / (base.g * base.g * base.delta_q0 * base.delta_q0);
    out.points.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        SweepPoint& pt = out.points[i];
        pt.x = grid[i];
        try {
            pt.result = decoherence_time(at(grid[i]), tol, rule);
        } catch (const Error& e) {
            pt.status = to_string(e.kind());
            pt.message = e.what();
        }
    });
    return out;
}

}
