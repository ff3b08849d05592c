#include "goldens.hpp"

#include "qfric/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace qfric;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Io;
}

ModelParams plate_params(double v, double lambda = 1.0)
{
    ModelParams p = with_dimless_frequencies({}, 0.03, 0.03);
    p.v = v;
    p.lambda = lambda;
    return p;
}

const Regulator kPlateReg{50.0, 3e-5};

}

TEST_CASE("default regulator")
{
    ModelParams p = with_dimless_frequencies({}, 0.03, 0.02);
    Regulator r = default_regulator(p);
    CHECK(r.cutoff == doctest::Approx(50.0));
    CHECK(r.infrared == doctest::Approx(2e-5));
    p.omega_plate = 0.0;
    r = default_regulator(p);
    CHECK(r.infrared == doctest::Approx(3e-5));
    p.a = 0.01;
    p.omega0 = 200.0;
    r = default_regulator(p);
    CHECK(r.cutoff == doctest::Approx(1e4));
    CHECK(r.infrared == doctest::Approx(0.1));
}

TEST_CASE("regulator validation")
{
    const ModelParams p = plate_params(0.5);
    CHECK(kind_of([&] { validate(Regulator{0.03, 0.0}, p); }) == ErrorKind::RegulatorTooSmall);
    CHECK(kind_of([&] { validate(Regulator{50.0, -1.0}, p); }) == ErrorKind::RegulatorTooSmall);
    CHECK(kind_of([&] { validate(Regulator{std::numeric_limits<double>::infinity(), 0.0}, p); })
          == ErrorKind::RegulatorTooSmall);
    CHECK_NOTHROW(validate(Regulator{50.0, 0.0}, p));
    CHECK(kind_of([&] { plate_kernels(p, {0.5, 4}, {50.0, 0.0}); }) == ErrorKind::RegulatorTooSmall);
    CHECK_THROWS_AS(free_kernels(p, {0.0, 4}, {50.0, 0.0}), ParamOutOfRange);
    CHECK_THROWS_AS(free_kernels(p, {0.5, 0}, {50.0, 0.0}), ParamOutOfRange);
}

TEST_CASE("free kernel goldens")
{
    for (const auto& g : golden::free_kernel) {
        ModelParams p;
        p.v = g.v;
        const KernelSeries s = free_kernels(p, {g.tau, 2}, {50.0, 0.0});
        CHECK(rel(s.noise[1], g.noise) < 1e-8);
        CHECK(rel(s.dissipation[1], g.dissipation) < 1e-8);
    }
}

TEST_CASE("free kernel at rest matches its closed form on a grid")
{
    ModelParams p;
    p.v = 0.0;
    p.g = 0.7;
    const double cutoff = 20.0;
    const double alpha = 1.0 / cutoff;
    const KernelSeries s = free_kernels(p, {0.3, 40}, {cutoff, 0.0});
    const double pre = p.g * p.g / (4.0 * M_PI);
    for (std::size_t k = 0; k < 40; ++k) {
        const double tau = 0.3 * static_cast<double>(k);
        const double den = alpha * alpha + tau * tau;
        CHECK(rel(s.noise[k], pre * alpha / den) < 1e-8);
        if (k > 0)
            CHECK(rel(s.dissipation[k], -2.0 * pre * tau / den) < 1e-8);
        else
            CHECK(s.dissipation[k] == 0.0);
    }
}

TEST_CASE("free kernel converges under tolerance refinement")
{
    ModelParams p;
    p.v = 0.6;
    const KernelSeries a = free_kernels(p, {0.25, 32}, {50.0, 0.0}, {1e-7, 1e-14, 20000});
    const KernelSeries b = free_kernels(p, {0.25, 32}, {50.0, 0.0}, {1e-12, 1e-16, 20000});
    double scale = 0.0;
    for (double x : b.noise)
        scale = std::max(scale, std::abs(x));
    for (std::size_t k = 0; k < 32; ++k)
        CHECK(std::abs(a.noise[k] - b.noise[k]) < 1e-6 * scale);
}

TEST_CASE("assembled matrices are symmetric and causal")
{
    ModelParams p;
    p.v = 0.4;
    const TimeGrid grid{0.5, 24};
    const KernelBundle b = compute_kernels(p, grid, {50.0, 0.0}, Components::Free);
    const KernelGrid& k = b.grid;
    REQUIRE(k.n() == 24);
    CHECK(k.noise.isApprox(k.noise.transpose(), 0.0));
    for (Eigen::Index i = 0; i < 24; ++i) {
        CHECK(k.dissipation(i, i) == 0.5 * b.free.dissipation[0]);
        for (Eigen::Index j = i + 1; j < 24; ++j)
            CHECK(k.dissipation(i, j) == 0.0);
        for (Eigen::Index j = 0; j < i; ++j)
            CHECK(k.dissipation(i, j) == b.free.dissipation[static_cast<std::size_t>(i - j)]);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k.noise);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * eig.eigenvalues().maxCoeff());
}

TEST_CASE("plate kernels scale with lambda squared and vanish without the plate")
{
    const TimeGrid grid{0.5, 6};
    const KernelSeries a = plate_kernels(plate_params(0.5, 0.1), grid, kPlateReg);
    const KernelSeries b = plate_kernels(plate_params(0.5, 0.2), grid, kPlateReg);
    for (std::size_t k = 0; k < grid.n; ++k) {
        CHECK(rel(b.noise[k], 4.0 * a.noise[k]) < 1e-12);
        if (k > 0)
            CHECK(rel(b.dissipation[k], 4.0 * a.dissipation[k]) < 1e-12);
    }
    const KernelSeries z = plate_kernels(plate_params(0.5, 0.0), grid, kPlateReg);
    for (std::size_t k = 0; k < grid.n; ++k) {
        CHECK(z.noise[k] == 0.0);
        CHECK(z.dissipation[k] == 0.0);
    }
    CHECK(kind_of([] {
              ModelParams p = plate_params(0.5);
              p.omega_plate = 0.0;
              plate_kernels(p, {0.5, 2}, kPlateReg);
          })
          == ErrorKind::DegenerateDenominator);
}

TEST_CASE("plate point mass exists only at rest")
{
    CHECK(plate_point_weight(plate_params(0.3), kPlateReg) == 0.0);
    const double w = plate_point_weight(plate_params(0.0), kPlateReg);
    CHECK(std::isfinite(w));
    CHECK(w != 0.0);
    CHECK(rel(plate_point_weight(plate_params(0.0, 0.5), kPlateReg), 0.25 * w) < 1e-14);
}

TEST_CASE("plate density is finite off the poles and vanishes at zero coupling")
{
    const ModelParams p = plate_params(0.5);
    for (double nu : {-0.01, 0.001, 0.01, 0.02, 0.03, 0.05, 0.1, 1.0, 10.0})
        CHECK(std::isfinite(plate_spectral_density(p, kPlateReg, nu)));
    CHECK(plate_spectral_density(plate_params(0.5, 0.0), kPlateReg, 0.02) == 0.0);
}

TEST_CASE("plate kernels match their independent oracle")
{
    for (const auto& g : golden::plate_kernel) {
        ModelParams p = plate_params(g.v);
        p.omega_plate = g.omega_plate;
        const KernelSeries s = plate_kernels(p, {g.tau, 2}, {g.cutoff, g.infrared});
        CHECK(rel(s.noise[1], g.noise) < 1e-6);
        CHECK(rel(s.dissipation[1], g.dissipation) < 1e-6);
    }
}

TEST_CASE("regulator sensitivity is small far from the cutoff scale")
{
    ModelParams p;
    p.v = 0.3;
    const RegulatorSensitivity s = regulator_sensitivity(p, {0.5, 16}, {50.0, 0.0}, Components::Free);
    CHECK(s.noise_change < 1e-2);
    CHECK(s.dissipation_change < 1e-2);
    CHECK(s.noise_change > 0.0);
}

TEST_CASE("noise matrix repair")
{
    Eigen::MatrixXd ok(2, 2);
    ok << 2.0, 1.0, 1.0, 2.0;
    Eigen::MatrixXd copy = ok;
    CHECK(repair_psd(copy) == 0.0);
    CHECK(copy == ok);

    Eigen::MatrixXd near(2, 2);
    const double e = 1e-12;
    near << 0.5 * (1.0 - e), 0.5 * (1.0 + e), 0.5 * (1.0 + e), 0.5 * (1.0 - e);
    const double change = repair_psd(near);
    CHECK(change == doctest::Approx(e).epsilon(1e-3));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(near);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-15);
    CHECK(near.isApprox(near.transpose(), 0.0));

    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK(kind_of([&] { repair_psd(bad); }) == ErrorKind::NotPositiveSemidefinite);
}

TEST_CASE("kernel grid validation")
{
    const Eigen::MatrixXd n = Eigen::MatrixXd::Identity(3, 3);
    const Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    CHECK_NOTHROW(make_kernel_grid(0.1, n, d));
    CHECK(kind_of([&] { make_kernel_grid(0.0, n, d); }) == ErrorKind::InvalidKernel);
    CHECK(kind_of([&] { make_kernel_grid(0.1, n, Eigen::MatrixXd::Zero(2, 2)); }) == ErrorKind::InvalidKernel);
    CHECK(kind_of([&] { make_kernel_grid(0.1, Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, 0)); })
          == ErrorKind::InvalidKernel);
    Eigen::MatrixXd m = n;
    m(0, 1) = 0.5;
    CHECK(kind_of([&] { make_kernel_grid(0.1, m, d); }) == ErrorKind::InvalidKernel);
    m = n;
    m(2, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK(kind_of([&] { make_kernel_grid(0.1, m, d); }) == ErrorKind::InvalidKernel);
    Eigen::MatrixXd u = d;
    u(0, 2) = 1.0;
    CHECK(kind_of([&] { make_kernel_grid(0.1, n, u); }) == ErrorKind::InvalidKernel);
}

TEST_CASE("assembly rejects series of the wrong length")
{
    KernelSeries s;
    s.noise.assign(4, 0.0);
    s.dissipation.assign(4, 0.0);
    KernelSeries t = s;
    t.noise.resize(3);
    CHECK(kind_of([&] { assemble(s, t, {0.1, 4}, {}); }) == ErrorKind::GridMismatch);
    CHECK(kind_of([&] { assemble(s, s, {0.1, 5}, {}); }) == ErrorKind::GridMismatch);
}

TEST_CASE("kernel csv round trip is exact")
{
    ModelParams p;
    p.v = 0.5;
    const KernelGrid k = compute_kernels(p, {0.2, 12}, {50.0, 1e-4}, Components::Free).grid;
    std::stringstream ss;
    write_csv(k, ss);
    const KernelGrid r = read_csv(ss);
    CHECK(r.dt == k.dt);
    CHECK(r.regulator.cutoff == k.regulator.cutoff);
    CHECK(r.regulator.infrared == k.regulator.infrared);
    CHECK(r.noise == k.noise);
    CHECK(r.dissipation == k.dissipation);

    std::istringstream missing("dt,n,cutoff,infrared\n0.1,2,50,0\ni,j,N,D\n0,0,1,0\n");
    CHECK(kind_of([&] { read_csv(missing); }) == ErrorKind::Io);
    std::istringstream garbage("hello\n");
    CHECK(kind_of([&] { read_csv(garbage); }) == ErrorKind::Io);
}
