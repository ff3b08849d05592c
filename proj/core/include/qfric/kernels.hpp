#pragma once

#include "qfric/model.hpp"
#include "qfric/quadrature.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace qfric {

// Spectral weight at lab-frame frequency p0 is damped by exp(-p0/cutoff).
// The plate correction is additionally damped by exp(-infrared/p0): at first
// order in lambda^2 its lightcone term grows like 1/p0 and the noise kernel
// diverges logarithmically without it.
struct Regulator {
    double cutoff = 0.0;
    double infrared = 0.0;
};

// cutoff = 50 max(omega0, omega_plate, 1/a); infrared = 1e-3 min(omega0, omega_plate, 1/a),
// with omega_plate dropped from the minimum when it is zero.
Regulator default_regulator(const ModelParams& p);

// Throws RegulatorTooSmall unless cutoff > max(omega0, omega_plate) and infrared >= 0.
void validate(const Regulator& reg, const ModelParams& p);

struct TimeGrid {
    double dt = 0.0;
    std::size_t n = 0;
};

// Kernel values at tau_k = k dt for k = 0..n-1.
struct KernelSeries {
    std::vector<double> noise;
    std::vector<double> dissipation;
    double abs_error = 0.0;
    std::size_t n_evals = 0;
};

// Spectral densities along the trajectory, per unit frequency in the detector
// frame, without the g^2 factor. The noise kernel is g^2 times the cosine
// transform of the density and the dissipation kernel is -2 g^2 Theta(tau)
// times its sine transform.
double free_spectral_density(const ModelParams& p, const Regulator& reg, double nu);
double plate_spectral_density(const ModelParams& p, const Regulator& reg, double nu, const Tolerance& tol = {});

// At v = 0 the plate density also carries a point mass at nu = omega_plate;
// this is its weight (zero for v > 0).
double plate_point_weight(const ModelParams& p, const Regulator& reg, const Tolerance& tol = {});

KernelSeries free_kernels(const ModelParams& p, const TimeGrid& grid, const Regulator& reg, const Tolerance& tol = {});
KernelSeries plate_kernels(const ModelParams& p, const TimeGrid& grid, const Regulator& reg, const Tolerance& tol = {});

// Noise matrix N(i,j) = N(|i-j| dt), symmetric positive semidefinite.
// Dissipation matrix D(i,j) = D((i-j) dt) for i > j and zero above the
// diagonal. The diagonal holds the coefficient applied with full weight to
// the current sample: D(0)/2 for a sampled continuous kernel (the endpoint
// trapezoid weight), or gamma/dt for a discretised gamma delta(t - t').
struct KernelGrid {
    double dt = 0.0;
    Eigen::MatrixXd noise;
    Eigen::MatrixXd dissipation;
    Regulator regulator;
    double psd_repair_norm = 0.0;

    std::size_t n() const noexcept { return static_cast<std::size_t>(noise.rows()); }
};

// Validates shape, finiteness, symmetry of N and causality of D; throws InvalidKernel.
KernelGrid make_kernel_grid(double dt, Eigen::MatrixXd noise, Eigen::MatrixXd dissipation, Regulator reg = {});

// Clips negative eigenvalues of a symmetric matrix in place and returns the
// Frobenius norm of the change. Throws NotPositiveSemidefinite when that norm
// exceeds max_fraction times the Frobenius norm of the input.
double repair_psd(Eigen::MatrixXd& n, double max_fraction = 1e-6);

// Sums the series element-wise, builds the matrices and repairs the noise matrix.
KernelGrid assemble(const KernelSeries& free, const KernelSeries& plate, const TimeGrid& grid, const Regulator& reg);

enum class Components { Free, Plate, Both };

struct KernelBundle {
    KernelSeries free;
    KernelSeries plate;
    KernelGrid grid;
};

// Computes the requested parts (the others are zero) and assembles them.
// Quadrature failures are rethrown as KernelQuadratureFailed.
KernelBundle compute_kernels(const ModelParams& p, const TimeGrid& grid, const Regulator& reg,
                             Components which = Components::Both, const Tolerance& tol = {});

// Largest change over tau >= 10/cutoff when the cutoff doubles: the noise
// change relative to max |N| and the pointwise relative dissipation change.
struct RegulatorSensitivity {
    double noise_change = 0.0;
    double dissipation_change = 0.0;
};

RegulatorSensitivity regulator_sensitivity(const ModelParams& p, const TimeGrid& grid, const Regulator& reg,
                                           Components which = Components::Both, const Tolerance& tol = {});

// Layout: a "dt,n,cutoff,infrared" header and its values, then "i,j,N,D" rows.
void write_csv(const KernelGrid& k, std::ostream& os);
KernelGrid read_csv(std::istream& is);

}
