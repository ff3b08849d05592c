#include "qfric/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace qfric {

namespace {

// Decay length, in units of 1/a, after which exp(-2 a kappa) drops below e^-50.
constexpr double kEvanescentReach = 25.0;
// Lab-frame spectral weight is neglected beyond this many cutoffs.
constexpr double kCutoffReach = 45.0;

double scaled_bessel_i0(double x)
{
    if (x < 500.0)
        return std::cyl_bessel_i(0.0, x) * std::exp(-x);
    const double r = 1.0 / x;
    return (1.0 + r / 8.0 + 9.0 * r * r / 128.0 + 225.0 * r * r * r / 3072.0) / std::sqrt(2.0 * M_PI * x);
}

struct Segment {
    bool fold;
    double a; // start, or centre for a fold
    double b; // end, or half width for a fold
};

struct Transform {
    std::vector<double> cosine;
    std::vector<double> sine;
    double abs_error = 0.0;
    std::size_t n_evals = 0;
};

void fill_trig(double nu, double weight, const TimeGrid& g, std::span<double> out, bool accumulate)
{
    const double c1 = std::cos(nu * g.dt);
    const double s1 = std::sin(nu * g.dt);
    double wr = 1.0;
    double wi = 0.0;
    for (std::size_t k = 0; k < g.n; ++k) {
        if (k % 32 == 0 && k > 0) {
            wr = std::cos(nu * g.dt * static_cast<double>(k));
            wi = std::sin(nu * g.dt * static_cast<double>(k));
        }
        if (accumulate) {
            out[2 * k] += weight * wr;
            out[2 * k + 1] += weight * wi;
        } else {
            out[2 * k] = weight * wr;
            out[2 * k + 1] = weight * wi;
        }
        const double nr = wr * c1 - wi * s1;
        wi = wr * s1 + wi * c1;
        wr = nr;
    }
}

// Spectral density evaluated at centre + offset; folds pass the exact offset from their pole.
using Density = std::function<double(double centre, double offset)>;

// Fold pieces start here, in units of sqrt(half width); the sliver below is a one-point rule.
constexpr double kFoldStart = 1e-5;

double coarse_mass(const Density& s, const Segment& seg)
{
    const Tolerance coarse{1e-4, 0.0, 2000};
    try {
        if (seg.fold) {
            return integrate_adaptive(
                       [&](double w) {
                           const double u = w * w;
                           return std::abs(2.0 * w * (s(seg.a, u) + s(seg.a, -u)));
                       },
                       kFoldStart * std::sqrt(seg.b), std::sqrt(seg.b), coarse)
                .value;
        }
        return integrate_adaptive([&](double x) { return std::abs(s(x, 0.0)); }, seg.a, seg.b, coarse).value;
    } catch (const QuadratureError& e) {
        if (e.kind() != ErrorKind::MaxSubdivisionsExceeded)
            throw;
        return std::abs(e.best().value);
    }
}

// Cosine and sine transforms of s over the segments at tau_k = k dt.
Transform transform(const Density& s, const std::vector<Segment>& segs, const TimeGrid& g,
                    const Tolerance& tol)
{
    Transform out;
    out.cosine.assign(g.n, 0.0);
    out.sine.assign(g.n, 0.0);
    double scale = 0.0;
    for (const Segment& seg : segs)
        scale += coarse_mass(s, seg);
    if (scale == 0.0)
        return out;

    const double tau_max = g.dt * static_cast<double>(g.n - 1);
    const double chunk = tau_max > 0.0 ? 8.0 * M_PI / tau_max : std::numeric_limits<double>::infinity();
    struct Piece {
        bool fold;
        double centre;
        double lo;
        double hi;
    };
    std::vector<Piece> pieces;
    for (const Segment& seg : segs) {
        if (seg.fold) {
            const std::size_t m = std::isfinite(chunk) ? static_cast<std::size_t>(std::ceil(seg.b / chunk)) : 1;
            for (std::size_t j = 0; j < m; ++j) {
                const double u0 = seg.b * static_cast<double>(j) / static_cast<double>(m);
                const double u1 = seg.b * static_cast<double>(j + 1) / static_cast<double>(m);
                pieces.push_back({true, seg.a, j == 0 ? kFoldStart * std::sqrt(seg.b) : std::sqrt(u0), std::sqrt(u1)});
            }
        } else if (seg.b > seg.a) {
            const std::size_t m = std::isfinite(chunk)
                ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((seg.b - seg.a) / chunk)))
                : 1;
            for (std::size_t j = 0; j < m; ++j) {
                const double x0 = seg.a + (seg.b - seg.a) * static_cast<double>(j) / static_cast<double>(m);
                const double x1 = j + 1 == m ? seg.b : seg.a + (seg.b - seg.a) * static_cast<double>(j + 1) / static_cast<double>(m);
                pieces.push_back({false, 0.0, x0, x1});
            }
        }
    }

    const std::size_t dim = 2 * g.n;
    const Tolerance local{tol.rel, tol.rel * scale / static_cast<double>(pieces.size()), tol.max_subdivisions};
    for (const Piece& pc : pieces) {
        VectorIntegrand f;
        if (pc.fold) {
            f = [&](double w, std::span<double> v) {
                const double u = w * w;
                fill_trig(pc.centre + u, 2.0 * w * s(pc.centre, u), g, v, false);
                fill_trig(pc.centre - u, 2.0 * w * s(pc.centre, -u), g, v, true);
            };
        } else {
            f = [&](double x, std::span<double> v) { fill_trig(x, s(x, 0.0), g, v, false); };
        }
        const VectorQuadratureResult r = integrate_adaptive_vector(f, dim, pc.lo, pc.hi, local);
        for (std::size_t k = 0; k < g.n; ++k) {
            out.cosine[k] += r.value[2 * k];
            out.sine[k] += r.value[2 * k + 1];
        }
        if (pc.fold && pc.lo > 0.0) {
            std::vector<double> sliver(dim);
            f(pc.lo, sliver);
            for (std::size_t k = 0; k < g.n; ++k) {
                out.cosine[k] += pc.lo * sliver[2 * k];
                out.sine[k] += pc.lo * sliver[2 * k + 1];
            }
            out.n_evals += 2;
        }
        out.abs_error += r.abs_error;
        out.n_evals += r.n_evals;
    }
    return out;
}

void validate_grid(const TimeGrid& g)
{
    if (!(g.dt > 0.0) || !std::isfinite(g.dt))
        throw ParamOutOfRange("dt", g.dt, "(0, inf)");
    if (g.n == 0)
        throw ParamOutOfRange("n", 0.0, "[1, inf)");
}

struct Plate {
    const ModelParams& p;
    const Regulator& reg;
    Tolerance inner;

    double weight(double p0) const { return std::exp(-p0 / reg.cutoff - reg.infrared / p0); }

    // Offsets nu - wp (1 - v) and nu - wp (1 + v); at v = 0 both are nu - wp.
    struct Point {
        double nu;
        double d1;
        double d2;
    };

    Point at(double centre, double offset) const
    {
        const double wp = p.omega_plate;
        return {centre + offset, (centre - wp * (1.0 - p.v)) + offset, (centre - wp * (1.0 + p.v)) + offset};
    }

    double re_e(double k2) const
    {
        if (k2 > 0.0)
            return std::cos(2.0 * p.a * std::sqrt(k2)) / k2;
        return std::exp(-2.0 * p.a * std::sqrt(-k2)) / k2;
    }

    double term_c(const Point& x) const
    {
        if (p.v == 0.0)
            return 0.0;
        const double wp = p.omega_plate;
        return -M_PI * weight(wp) / (2.0 * wp * p.v) * re_e(-x.d1 * x.d2 / (p.v * p.v));
    }

    double term_b(const Point& x) const
    {
        if (!(x.nu > 0.0))
            return 0.0;
        const double wp = p.omega_plate;
        const double v = p.v;
        const double pa = x.nu / (1.0 - v);
        const double pb = x.nu / (1.0 + v);
        const double da = x.d1 / (1.0 - v) * (pa + wp);
        const double db = x.d2 / (1.0 + v) * (pb + wp);
        return -M_PI / (2.0 * x.nu) * (weight(pa) / da + weight(pb) / db);
    }

    double term_a(const Point& x) const
    {
        const double nu = x.nu;
        if (!(nu > 0.0))
            return 0.0;
        const double v = p.v;
        const double wp = p.omega_plate;
        const double s = 1.0 - v * v;
        const double lo = -nu / (1.0 + v);
        const double width = 2.0 * nu / s;
        const double two_a = 2.0 * p.a;
        if (v == 0.0) {
            const QuadratureResult r = integrate_endpoint_invsqrt_span(
                [&](double, double to_lo, double to_hi) {
                    const double q = to_lo * to_hi;
                    return std::sin(two_a * std::sqrt(q)) / q;
                },
                lo, width, {true, true}, inner);
            return weight(nu) * r.value / (x.d1 * (nu + wp));
        }
        // Pole of the band integrand, as distances from the lower and upper band edges.
        const double left = -x.d2 / (v * (1.0 + v));
        const double right = x.d1 / (v * (1.0 - v));
        if (left > 0.0 && right > 0.0) {
            return cauchy_pv_span(
                       [&](double p1, double to_lo, double to_hi) {
                           const double q = s * to_lo * to_hi;
                           const double p0 = nu + v * p1;
                           return weight(p0) * std::sin(two_a * std::sqrt(q)) / (q * v * (p0 + wp));
                       },
                       lo, left, right, inner, {true, true})
                .value;
        }
        return integrate_endpoint_invsqrt_span(
                   [&](double p1, double to_lo, double to_hi) {
                       const double q = s * to_lo * to_hi;
                       const double p0 = nu + v * p1;
                       const double dp = v * (to_lo < to_hi ? to_lo - left : right - to_hi);
                       return weight(p0) * std::sin(two_a * std::sqrt(q)) / (q * dp * (p0 + wp));
                   },
                   lo, width, {true, true}, inner)
            .value;
    }

    double density(double centre, double offset) const
    {
        const Point x = at(centre, offset);
        return term_a(x) + term_b(x) + term_c(x);
    }

    double point_weight() const
    {
        const double wp = p.omega_plate;
        auto profile = [&](double q) {
            return q < wp ? std::cos(2.0 * p.a * std::sqrt(wp * wp - q * q))
                          : std::exp(-2.0 * p.a * std::sqrt(q * q - wp * wp));
        };
        const double top = std::sqrt(wp * wp + std::pow(kEvanescentReach / p.a, 2));
        const QuadratureResult near = cauchy_pv([&](double q) { return -profile(q) / (q + wp); }, wp, 0.0, 2.0 * wp, inner);
        const QuadratureResult tail = integrate_adaptive(
            [&](double q) { return -profile(q) / ((q - wp) * (q + wp)); }, 2.0 * wp, std::max(top, 2.0 * wp), inner);
        return -M_PI * weight(wp) / (2.0 * wp) * 2.0 * (near.value + tail.value);
    }
};

Tolerance inner_tolerance(const Tolerance& tol) { return {0.1 * tol.rel, tol.abs, tol.max_subdivisions}; }

void require_plate(const ModelParams& p, const Regulator& reg)
{
    if (!(p.omega_plate > 0.0))
        throw Error(ErrorKind::DegenerateDenominator, "plate kernels need a positive plate frequency");
    if (!(reg.infrared > 0.0))
        throw Error(ErrorKind::RegulatorTooSmall, "plate kernels need a positive infrared regulator");
}

std::string regulator_message(const Regulator& reg, double bound)
{
    std::ostringstream os;
    os.precision(17);
    os << "cutoff " << reg.cutoff << " must exceed " << bound << " and infrared " << reg.infrared
       << " must be non-negative";
    return os.str();
}

}

Regulator default_regulator(const ModelParams& p)
{
    const double inv_a = 1.0 / p.a;
    double low = std::min(p.omega0, inv_a);
    if (p.omega_plate > 0.0)
        low = std::min(low, p.omega_plate);
    return {50.0 * std::max({p.omega0, p.omega_plate, inv_a}), 1e-3 * low};
}

void validate(const Regulator& reg, const ModelParams& p)
{
    const double bound = std::max(p.omega0, p.omega_plate);
    if (!(reg.cutoff > bound) || !std::isfinite(reg.cutoff) || !(reg.infrared >= 0.0) || !std::isfinite(reg.infrared))
        throw Error(ErrorKind::RegulatorTooSmall, regulator_message(reg, bound));
}

double free_spectral_density(const ModelParams& p, const Regulator& reg, double nu)
{
    if (!(nu > 0.0))
        return 0.0;
    const double s = 1.0 - p.v * p.v;
    const double alpha = 1.0 / (s * reg.cutoff);
    const double beta = p.v * alpha;
    return std::exp(-(alpha - beta) * nu) * scaled_bessel_i0(beta * nu) / (4.0 * M_PI * std::sqrt(s));
}

double plate_spectral_density(const ModelParams& p, const Regulator& reg, double nu, const Tolerance& tol)
{
    require_plate(p, reg);
    const Plate plate{p, reg, inner_tolerance(tol)};
    return p.lambda * p.lambda / (8.0 * M_PI * M_PI) * plate.density(nu, 0.0);
}

double plate_point_weight(const ModelParams& p, const Regulator& reg, const Tolerance& tol)
{
    if (p.v > 0.0)
        return 0.0;
    require_plate(p, reg);
    const Plate plate{p, reg, inner_tolerance(tol)};
    return p.lambda * p.lambda / (8.0 * M_PI * M_PI) * plate.point_weight();
}

KernelSeries free_kernels(const ModelParams& p, const TimeGrid& grid, const Regulator& reg, const Tolerance& tol)
{
    validate(p);
    validate(reg, p);
    validate_grid(grid);
    KernelSeries out;
    out.noise.assign(grid.n, 0.0);
    out.dissipation.assign(grid.n, 0.0);
    if (p.g == 0.0)
        return out;
    const double top = kCutoffReach * (1.0 + p.v) * reg.cutoff;
    const Transform t = transform([&](double c, double u) { return free_spectral_density(p, reg, c + u); }, {{false, 0.0, top}},
                                  grid, tol);
    const double g2 = p.g * p.g;
    for (std::size_t k = 0; k < grid.n; ++k) {
        out.noise[k] = g2 * t.cosine[k];
        out.dissipation[k] = k == 0 ? 0.0 : -2.0 * g2 * t.sine[k];
    }
    out.abs_error = 2.0 * g2 * t.abs_error;
    out.n_evals = t.n_evals;
    return out;
}

KernelSeries plate_kernels(const ModelParams& p, const TimeGrid& grid, const Regulator& reg, const Tolerance& tol)
{
    validate(p);
    validate(reg, p);
    validate_grid(grid);
    KernelSeries out;
    out.noise.assign(grid.n, 0.0);
    out.dissipation.assign(grid.n, 0.0);
    if (p.g == 0.0 || p.lambda == 0.0)
        return out;
    require_plate(p, reg);
    const Plate plate{p, reg, inner_tolerance(tol)};
    const double wp = p.omega_plate;
    const double v = p.v;
    const double reach = std::sqrt(wp * wp + std::pow(kEvanescentReach / p.a, 2));
    const double top = std::max(kCutoffReach * (1.0 + v) * reg.cutoff, wp + v * reach);
    std::vector<Segment> segs;
    if (v > 0.0) {
        const double bottom = std::min(0.0, wp - v * reach);
        const double lower = wp * (1.0 - v);
        const double upper = wp * (1.0 + v);
        const double h2 = 0.5 * (upper - lower);
        const double h1 = std::min(0.5 * lower, h2);
        if (bottom < 0.0)
            segs.push_back({false, bottom, 0.0});
        segs.push_back({false, 0.0, lower - h1});
        segs.push_back({true, lower, h1});
        segs.push_back({false, lower + h1, upper - h2});
        segs.push_back({true, upper, h2});
        segs.push_back({false, upper + h2, top});
    } else {
        segs.push_back({false, 0.0, 0.5 * wp});
        segs.push_back({true, wp, 0.5 * wp});
        segs.push_back({false, 1.5 * wp, top});
    }
    const Transform t = transform([&](double c, double u) { return plate.density(c, u); }, segs, grid, tol);
    const double point = v > 0.0 ? 0.0 : plate.point_weight();
    const double pre = p.g * p.g * p.lambda * p.lambda / (8.0 * M_PI * M_PI);
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double tau = grid.dt * static_cast<double>(k);
        out.noise[k] = pre * (t.cosine[k] + point * std::cos(wp * tau));
        out.dissipation[k] = k == 0 ? 0.0 : -2.0 * pre * (t.sine[k] + point * std::sin(wp * tau));
    }
    out.abs_error = 2.0 * pre * t.abs_error;
    out.n_evals = t.n_evals;
    return out;
}

KernelGrid make_kernel_grid(double dt, Eigen::MatrixXd noise, Eigen::MatrixXd dissipation, Regulator reg)
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw Error(ErrorKind::InvalidKernel, "time step must be positive");
    if (noise.rows() != noise.cols() || dissipation.rows() != noise.rows() || dissipation.cols() != noise.cols()
        || noise.rows() == 0)
        throw Error(ErrorKind::InvalidKernel, "kernel matrices must be square, non-empty and of equal size");
    if (!noise.allFinite() || !dissipation.allFinite())
        throw Error(ErrorKind::InvalidKernel, "kernel matrices must be finite");
    const double scale = std::max(noise.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    if ((noise - noise.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw Error(ErrorKind::InvalidKernel, "noise matrix must be symmetric");
    for (Eigen::Index i = 0; i < dissipation.rows(); ++i)
        for (Eigen::Index j = i + 1; j < dissipation.cols(); ++j)
            if (dissipation(i, j) != 0.0)
                throw Error(ErrorKind::InvalidKernel, "dissipation matrix must vanish above the diagonal");
    KernelGrid k;
    k.dt = dt;
    k.noise = 0.5 * (noise + noise.transpose());
    k.dissipation = std::move(dissipation);
    k.regulator = reg;
    return k;
}

double repair_psd(Eigen::MatrixXd& n, double max_fraction)
{
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(n);
    if (eig.info() != Eigen::Success)
        throw Error(ErrorKind::FactorizationFailed, "eigen-decomposition of the noise matrix failed");
    const Eigen::VectorXd values = eig.eigenvalues();
    if (values.minCoeff() >= 0.0)
        return 0.0;
    const Eigen::VectorXd clipped = values.cwiseMax(0.0);
    const double change = (values - clipped).norm();
    const double norm = n.norm();
    if (change > max_fraction * norm) {
        std::ostringstream os;
        os.precision(6);
        os << "negative spectrum of norm " << change << " exceeds " << max_fraction << " of the matrix norm " << norm;
        throw Error(ErrorKind::NotPositiveSemidefinite, os.str());
    }
    const Eigen::MatrixXd& vecs = eig.eigenvectors();
    Eigen::MatrixXd repaired = vecs * clipped.asDiagonal() * vecs.transpose();
    n = 0.5 * (repaired + repaired.transpose());
    return change;
}

KernelGrid assemble(const KernelSeries& free, const KernelSeries& plate, const TimeGrid& grid, const Regulator& reg)
{
    validate_grid(grid);
    if (free.noise.size() != grid.n || plate.noise.size() != grid.n || free.dissipation.size() != grid.n
        || plate.dissipation.size() != grid.n)
        throw Error(ErrorKind::GridMismatch, "kernel series length does not match the grid");
    const auto n = static_cast<Eigen::Index>(grid.n);
    Eigen::MatrixXd noise(n, n);
    Eigen::MatrixXd diss = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto lag = static_cast<std::size_t>(std::abs(i - j));
            noise(i, j) = free.noise[lag] + plate.noise[lag];
            if (i > j)
                diss(i, j) = free.dissipation[lag] + plate.dissipation[lag];
        }
        diss(i, i) = 0.5 * (free.dissipation[0] + plate.dissipation[0]);
    }
    KernelGrid k = make_kernel_grid(grid.dt, std::move(noise), std::move(diss), reg);
    k.psd_repair_norm = repair_psd(k.noise);
    return k;
}

KernelBundle compute_kernels(const ModelParams& p, const TimeGrid& grid, const Regulator& reg, Components which,
                             const Tolerance& tol)
{
    validate(p);
    validate(reg, p);
    validate_grid(grid);
    KernelBundle out;
    auto zeros = [&]() {
        KernelSeries s;
        s.noise.assign(grid.n, 0.0);
        s.dissipation.assign(grid.n, 0.0);
        return s;
    };
    try {
        out.free = which == Components::Plate ? zeros() : free_kernels(p, grid, reg, tol);
        out.plate = which == Components::Free ? zeros() : plate_kernels(p, grid, reg, tol);
    } catch (const QuadratureError& e) {
        std::ostringstream os;
        os.precision(17);
        os << "kernel quadrature failed for all tau in [0, " << grid.dt * static_cast<double>(grid.n - 1)
           << "] near frequency " << e.location() << ": " << e.what();
        throw Error(ErrorKind::KernelQuadratureFailed, os.str());
    }
    out.grid = assemble(out.free, out.plate, grid, reg);
    return out;
}

RegulatorSensitivity regulator_sensitivity(const ModelParams& p, const TimeGrid& grid, const Regulator& reg,
                                           Components which, const Tolerance& tol)
{
    const KernelBundle base = compute_kernels(p, grid, reg, which, tol);
    const KernelBundle twice = compute_kernels(p, grid, {2.0 * reg.cutoff, reg.infrared}, which, tol);
    RegulatorSensitivity out;
    double n_scale = 0.0;
    double d_scale = 0.0;
    for (std::size_t k = 0; k < grid.n; ++k) {
        n_scale = std::max(n_scale, std::abs(base.free.noise[k] + base.plate.noise[k]));
        d_scale = std::max(d_scale, std::abs(base.free.dissipation[k] + base.plate.dissipation[k]));
    }
    for (std::size_t k = 0; k < grid.n; ++k) {
        if (grid.dt * static_cast<double>(k) < 10.0 / reg.cutoff)
            continue;
        const double n0 = base.free.noise[k] + base.plate.noise[k];
        const double n1 = twice.free.noise[k] + twice.plate.noise[k];
        const double d0 = base.free.dissipation[k] + base.plate.dissipation[k];
        const double d1 = twice.free.dissipation[k] + twice.plate.dissipation[k];
        if (n_scale > 0.0)
            out.noise_change = std::max(out.noise_change, std::abs(n1 - n0) / n_scale);
        if (std::abs(d0) > 1e-12 * d_scale)
            out.dissipation_change = std::max(out.dissipation_change, std::abs(d1 - d0) / std::abs(d0));
    }
    return out;
}

void write_csv(const KernelGrid& k, std::ostream& os)
{
    os.precision(17);
    os << "dt,n,cutoff,infrared\n" << k.dt << ',' << k.n() << ',' << k.regulator.cutoff << ',' << k.regulator.infrared
       << "\ni,j,N,D\n";
    for (Eigen::Index i = 0; i < k.noise.rows(); ++i)
        for (Eigen::Index j = 0; j < k.noise.cols(); ++j)
            os << i << ',' << j << ',' << k.noise(i, j) << ',' << k.dissipation(i, j) << '\n';
}

KernelGrid read_csv(std::istream& is)
{
    auto fail = [](const std::string& what) { throw Error(ErrorKind::Io, "kernel csv: " + what); };
    std::string line;
    if (!std::getline(is, line) || line != "dt,n,cutoff,infrared")
        fail("missing header");
    if (!std::getline(is, line))
        fail("missing grid line");
    double dt = 0.0;
    std::size_t n = 0;
    Regulator reg;
    {
        std::istringstream ls(line);
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(ls >> dt >> c1 >> n >> c2 >> reg.cutoff >> c3 >> reg.infrared) || c1 != ',' || c2 != ',' || c3 != ',')
            fail("malformed grid line");
    }
    if (!std::getline(is, line) || line != "i,j,N,D")
        fail("missing row header");
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd diss = Eigen::MatrixXd::Zero(m, m);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        long i = 0, j = 0;
        double nv = 0.0, dv = 0.0;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(ls >> i >> c1 >> j >> c2 >> nv >> c3 >> dv) || c1 != ',' || c2 != ',' || c3 != ',')
            fail("malformed row: " + line);
        if (i < 0 || j < 0 || i >= m || j >= m)
            fail("index out of range: " + line);
        noise(i, j) = nv;
        diss(i, j) = dv;
        ++rows;
    }
    if (rows != n * n)
        fail("expected n*n rows");
    return make_kernel_grid(dt, std::move(noise), std::move(diss), reg);
}

}
