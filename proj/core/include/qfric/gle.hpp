#pragma once

#include "qfric/errors.hpp"
#include "qfric/kernels.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qfric {

// q'' + omega0^2 q + int_0^t D(t, t') q(t') dt' = xi(t), started at rest
// history: nothing before t = 0 contributes to the memory integral.
struct Oscillator {
    double omega0 = 0.03;
    double q0 = 0.0;
    double qdot0 = 0.0;
};

struct Trajectory {
    double dt = 0.0;
    std::vector<double> q;
    std::vector<double> qdot;
};

class BlowupDetected : public Error {
public:
    BlowupDetected(const std::string& message, Trajectory partial, std::size_t step);
    const Trajectory& partial() const noexcept { return partial_; }
    std::size_t step() const noexcept { return step_; }

private:
    Trajectory partial_;
    std::size_t step_;
};

// Velocity Verlet with a trapezoid memory sum over the stored samples. The
// memory at step i is dt [ sum_{j<i} w_j D(i,j) q_j + D(i,i) q_i ] with
// w_0 = 1/2 and w_j = 1 otherwise. An empty xi means no noise. Throws
// BlowupDetected when |q| exceeds 1e12 times the initial scale or turns non-finite.
Trajectory integrate_gle(const Oscillator& osc, const KernelGrid& kernel, std::span<const double> xi = {});

// Same scheme for a stationary kernel given by lag: D(i,j) = lags[i-j], with
// lags[0] on the diagonal. Lags beyond the vector are zero; zero lags are skipped.
Trajectory integrate_gle(const Oscillator& osc, double dt, std::size_t n, const std::vector<double>& lags,
                         std::span<const double> xi = {});

// L with L L^T = N from the eigen-decomposition, clipping eigenvalues above
// -1e-6 times the spectral radius to zero. Throws FactorizationFailed otherwise.
Eigen::MatrixXd noise_factor(const Eigen::MatrixXd& noise);

// One noise realisation xi = L z with z drawn from NormalStream(seed).
Eigen::VectorXd sample_noise(const Eigen::MatrixXd& factor, std::uint64_t seed);

struct NoiseStatistics {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance; // unbiased sample covariance
};

// Realisations use seeds base_seed + m for m in [0, samples).
NoiseStatistics noise_statistics(const KernelGrid& kernel, std::size_t samples, std::uint64_t base_seed);

struct EnsembleResult {
    std::size_t n_requested = 0;
    std::vector<std::size_t> failed; // member indices that blew up
    std::vector<double> mean_q;
    std::vector<double> mean_qdot;
    std::vector<double> var_q; // unbiased; zero when fewer than two members succeed
    Eigen::MatrixXd covariance_q; // filled only when requested
};

// Member m uses seed base_seed + m; members run concurrently but results do
// not depend on the worker count.
EnsembleResult run_ensemble(const Oscillator& osc, const KernelGrid& kernel, std::size_t members,
                            std::uint64_t base_seed, bool with_covariance = false);

}
