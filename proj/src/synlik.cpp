#include "ssinfer/synlik.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ssinfer/errors.hpp"
#include "ssinfer/parallel.hpp"

namespace ssinfer {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> sample_mean_cov(const Eigen::MatrixXd& stats) {
    const long m = stats.rows();
    const long d = stats.cols();
    if (d < 1) throw std::invalid_argument("sample_mean_cov: empty statistics");
    if (m < d + 2)
        throw std::invalid_argument(
            "sample_mean_cov: simulation budget too small (need M >= d+2, got M=" +
            std::to_string(m) + ", d=" + std::to_string(d) + ")");
    const Eigen::VectorXd mu = stats.colwise().mean();
    const Eigen::MatrixXd centered = stats.rowwise() - mu.transpose();
    const Eigen::MatrixXd sigma =
        (centered.transpose() * centered) / static_cast<double>(m - 1);
    return {mu, sigma};
}

double gaussian_logdensity(const Eigen::VectorXd& s, const Eigen::VectorXd& mu,
                           const Eigen::MatrixXd& sigma, Eigen::MatrixXd* sigma_used,
                           double* delta_used) {
    const long d = s.size();
    if (mu.size() != d || sigma.rows() != d || sigma.cols() != d)
        throw std::invalid_argument("gaussian_logdensity: dimension mismatch");

    const double trace_scale = sigma.trace() / static_cast<double>(d);
    const double scale = trace_scale > 0.0 ? trace_scale : 1.0;

    for (const double delta : kJitterDeltas) {
        Eigen::MatrixXd candidate = sigma;
        if (delta > 0.0) candidate.diagonal().array() += delta * scale;
        Eigen::LLT<Eigen::MatrixXd> llt(candidate);
        if (llt.info() != Eigen::Success) continue;
        const Eigen::MatrixXd& lower = llt.matrixLLT();
        double logdet = 0.0;
        bool ok = true;
        for (long i = 0; i < d; ++i) {
            const double pivot = lower(i, i);
            if (!(pivot > 0.0) || !std::isfinite(pivot)) {
                ok = false;
                break;
            }
            logdet += 2.0 * std::log(pivot);
        }
        if (!ok) continue;
        const Eigen::VectorXd diff = s - mu;
        const double quad = llt.matrixL().solve(diff).squaredNorm();
        if (sigma_used) *sigma_used = candidate;
        if (delta_used) *delta_used = delta;
        return -0.5 * (d * kLog2Pi + logdet + quad);
    }
    throw SingularCovariance("gaussian_logdensity: covariance singular after maximum jitter");
}

SynlikFit sl_estimate(const StatSimulator& simulate, const Eigen::VectorXd& s_obs, int m,
                      std::uint64_t seed, const SynlikOptions& options) {
    const long d = s_obs.size();
    if (d < 1) throw std::invalid_argument("sl_estimate: empty observed statistics");
    if (m < d + 2)
        throw std::invalid_argument("sl_estimate: budget m must be at least d+2");

    Eigen::MatrixXd stats(m, d);
    std::vector<char> failed(m, 0);
    parallel_for(m, options.threads, [&](long i) {
        RngEngine rng = make_rng(seed, static_cast<std::uint64_t>(i));
        try {
            const Eigen::VectorXd row = simulate(rng);
            if (row.size() != d || !row.allFinite()) {
                failed[i] = 1;
                return;
            }
            stats.row(i) = row.transpose();
        } catch (const SimulationFailure&) {
            failed[i] = 1;
        }
    });

    SynlikFit fit;
    fit.m = m;
    fit.seed = seed;
    long n_failed = 0;
    for (const char f : failed) n_failed += f;
    fit.n_failed = static_cast<int>(n_failed);

    const long survivors = m - n_failed;
    if (n_failed > options.max_fail_fraction * m || survivors < d + 2) {
        fit.log_sl = -std::numeric_limits<double>::infinity();
        return fit;
    }

    Eigen::MatrixXd kept(survivors, d);
    long row = 0;
    for (long i = 0; i < m; ++i)
        if (!failed[i]) kept.row(row++) = stats.row(i);

    auto [mu, sigma] = sample_mean_cov(kept);
    if (options.shrinkage > 0.0) {
        const double w = options.shrinkage;
        const Eigen::MatrixXd diag = sigma.diagonal().asDiagonal();
        sigma = (1.0 - w) * sigma + w * diag;
    }
    fit.mu_hat = mu;
    fit.log_sl = gaussian_logdensity(s_obs, mu, sigma, &fit.sigma_hat, nullptr);
    return fit;
}

}  // namespace ssinfer
