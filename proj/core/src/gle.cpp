#include "qfric/gle.hpp"

#include "qfric/parallel.hpp"
#include "qfric/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qfric {

BlowupDetected::BlowupDetected(const std::string& message, Trajectory partial, std::size_t step)
    : Error(ErrorKind::BlowupDetected, message), partial_(std::move(partial)), step_(step)
{
}

namespace {

void check_oscillator(const Oscillator& osc)
{
    if (!(osc.omega0 > 0.0) || !std::isfinite(osc.omega0))
        throw ParamOutOfRange("omega0", osc.omega0, "(0, inf)");
    if (!std::isfinite(osc.q0))
        throw ParamOutOfRange("q0", osc.q0, "finite");
    if (!std::isfinite(osc.qdot0))
        throw ParamOutOfRange("qdot0", osc.qdot0, "finite");
}

template <class Memory>
Trajectory verlet(const Oscillator& osc, double dt, std::size_t n, std::span<const double> xi, Memory memory)
{
    check_oscillator(osc);
    if (!(dt > 0.0))
        throw ParamOutOfRange("dt", dt, "(0, inf)");
    if (!xi.empty() && xi.size() != n)
        throw Error(ErrorKind::GridMismatch, "noise length does not match the grid");
    Trajectory tr;
    tr.dt = dt;
    tr.q.assign(n, 0.0);
    tr.qdot.assign(n, 0.0);
    if (n == 0)
        return tr;
    double noise_peak = 0.0;
    for (double x : xi)
        noise_peak = std::max(noise_peak, std::abs(x));
    const double w2 = osc.omega0 * osc.omega0;
    const double scale = std::max({std::abs(osc.q0), std::abs(osc.qdot0) / osc.omega0, noise_peak / w2});
    const double limit = scale > 0.0 ? 1e12 * scale : std::numeric_limits<double>::infinity();
    auto force = [&](std::size_t i) {
        return -w2 * tr.q[i] - memory(i, tr.q) + (xi.empty() ? 0.0 : xi[i]);
    };
    tr.q[0] = osc.q0;
    tr.qdot[0] = osc.qdot0;
    double acc = force(0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        tr.q[i + 1] = tr.q[i] + dt * tr.qdot[i] + 0.5 * dt * dt * acc;
        const double next = force(i + 1);
        tr.qdot[i + 1] = tr.qdot[i] + 0.5 * dt * (acc + next);
        acc = next;
        if (!std::isfinite(tr.q[i + 1]) || !std::isfinite(tr.qdot[i + 1]) || std::abs(tr.q[i + 1]) > limit) {
            std::ostringstream os;
            os.precision(17);
            os << "|q| = " << std::abs(tr.q[i + 1]) << " at step " << i + 1 << " exceeds 1e12 times the initial scale "
               << scale;
            tr.q.resize(i + 2);
            tr.qdot.resize(i + 2);
            throw BlowupDetected(os.str(), std::move(tr), i + 1);
        }
    }
    return tr;
}

}

Trajectory integrate_gle(const Oscillator& osc, const KernelGrid& kernel, std::span<const double> xi)
{
    const Eigen::MatrixXd& d = kernel.dissipation;
    const double dt = kernel.dt;
    return verlet(osc, dt, kernel.n(), xi, [&](std::size_t i, const std::vector<double>& q) {
        const auto row = static_cast<Eigen::Index>(i);
        double sum = d(row, row) * q[i];
        if (i > 0) {
            sum += 0.5 * d(row, 0) * q[0];
            for (std::size_t j = 1; j < i; ++j)
                sum += d(row, static_cast<Eigen::Index>(j)) * q[j];
        }
        return dt * sum;
    });
}

Trajectory integrate_gle(const Oscillator& osc, double dt, std::size_t n, const std::vector<double>& lags,
                         std::span<const double> xi)
{
    std::vector<std::size_t> active;
    for (std::size_t l = 1; l < lags.size(); ++l)
        if (lags[l] != 0.0)
            active.push_back(l);
    const double diag = lags.empty() ? 0.0 : lags[0];
    return verlet(osc, dt, n, xi, [&](std::size_t i, const std::vector<double>& q) {
        double sum = diag * q[i];
        for (std::size_t l : active) {
            if (l > i)
                break;
            const std::size_t j = i - l;
            sum += (j == 0 ? 0.5 : 1.0) * lags[l] * q[j];
        }
        return dt * sum;
    });
}

Eigen::MatrixXd noise_factor(const Eigen::MatrixXd& noise)
{
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(noise);
    if (eig.info() != Eigen::Success)
        throw Error(ErrorKind::FactorizationFailed, "eigen-decomposition of the noise matrix failed");
    const Eigen::VectorXd& ev = eig.eigenvalues();
    if (ev.size() > 0 && ev.minCoeff() < -1e-6 * std::max(ev.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min())) {
        std::ostringstream os;
        os.precision(17);
        os << "noise matrix has eigenvalue " << ev.minCoeff() << " below -1e-6 times its spectral radius";
        throw Error(ErrorKind::FactorizationFailed, os.str());
    }
    const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * roots.asDiagonal();
}

Eigen::VectorXd sample_noise(const Eigen::MatrixXd& factor, std::uint64_t seed)
{
    NormalStream rng(seed);
    Eigen::VectorXd z(factor.cols());
    for (Eigen::Index k = 0; k < z.size(); ++k)
        z[k] = rng.next_normal();
    return factor * z;
}

NoiseStatistics noise_statistics(const KernelGrid& kernel, std::size_t samples, std::uint64_t base_seed)
{
    const Eigen::MatrixXd factor = noise_factor(kernel.noise);
    const auto n = static_cast<Eigen::Index>(kernel.n());
    Eigen::MatrixXd draws(n, static_cast<Eigen::Index>(samples));
    parallel_for(samples, [&](std::size_t m) { draws.col(static_cast<Eigen::Index>(m)) = sample_noise(factor, base_seed + m); });
    NoiseStatistics out;
    out.mean = draws.rowwise().mean();
    const Eigen::MatrixXd centred = draws.colwise() - out.mean;
    out.covariance = centred * centred.transpose() / std::max<double>(1.0, static_cast<double>(samples) - 1.0);
    return out;
}

EnsembleResult run_ensemble(const Oscillator& osc, const KernelGrid& kernel, std::size_t members,
                            std::uint64_t base_seed, bool with_covariance)
{
    check_oscillator(osc);
    const Eigen::MatrixXd factor = noise_factor(kernel.noise);
    const std::size_t n = kernel.n();
    std::vector<std::vector<double>> qs(members);
    std::vector<std::vector<double>> vs(members);
    std::vector<char> ok(members, 0);
    parallel_for(members, [&](std::size_t m) {
        const Eigen::VectorXd xi = sample_noise(factor, base_seed + m);
        try {
            Trajectory tr = integrate_gle(osc, kernel, std::span<const double>(xi.data(), n));
            qs[m] = std::move(tr.q);
            vs[m] = std::move(tr.qdot);
            ok[m] = 1;
        } catch (const BlowupDetected&) {
        }
    });
    EnsembleResult out;
    out.n_requested = members;
    out.mean_q.assign(n, 0.0);
    out.mean_qdot.assign(n, 0.0);
    out.var_q.assign(n, 0.0);
    std::size_t good = 0;
    for (std::size_t m = 0; m < members; ++m) {
        if (!ok[m]) {
            out.failed.push_back(m);
            continue;
        }
        ++good;
        for (std::size_t k = 0; k < n; ++k) {
            out.mean_q[k] += qs[m][k];
            out.mean_qdot[k] += vs[m][k];
        }
    }
    if (good == 0)
        return out;
    for (std::size_t k = 0; k < n; ++k) {
        out.mean_q[k] /= static_cast<double>(good);
        out.mean_qdot[k] /= static_cast<double>(good);
    }
    if (good > 1) {
        for (std::size_t m = 0; m < members; ++m) {
            if (!ok[m])
                continue;
            for (std::size_t k = 0; k < n; ++k) {
                const double d = qs[m][k] - out.mean_q[k];
                out.var_q[k] += d * d;
            }
        }
        for (double& x : out.var_q)
            x /= static_cast<double>(good - 1);
    }
    if (with_covariance && good > 1) {
        const auto nn = static_cast<Eigen::Index>(n);
        Eigen::MatrixXd centred(nn, static_cast<Eigen::Index>(good));
        Eigen::Index col = 0;
        for (std::size_t m = 0; m < members; ++m) {
            if (!ok[m])
                continue;
            for (Eigen::Index k = 0; k < nn; ++k)
                centred(k, col) = qs[m][static_cast<std::size_t>(k)] - out.mean_q[static_cast<std::size_t>(k)];
            ++col;
        }
        out.covariance_q = centred * centred.transpose() / static_cast<double>(good - 1);
    }
    return out;
}

}
