#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>

#include "ssinfer/rng.hpp"

namespace ssinfer {

/// Simulates one dataset at bound parameters and returns its statistics.
/// May throw SimulationFailure; the caller decides the failure policy.
using StatSimulator = std::function<Eigen::VectorXd(RngEngine&)>;

struct SynlikOptions {
    /// Linear shrinkage of the covariance toward its diagonal.
    double shrinkage = 0.0;
    /// If more than this fraction of replicates fail, log SL is -inf.
    double max_fail_fraction = 0.1;
    int threads = 1;
};

struct SynlikFit {
    Eigen::VectorXd mu_hat;
    Eigen::MatrixXd sigma_hat;  // regularized covariance actually used
    int m = 0;                  // requested simulation budget
    double log_sl = 0.0;
    int n_failed = 0;
    std::uint64_t seed = 0;
};

/// Mean and unbiased (1/(M-1)) covariance of the rows. Requires M >= d+2 so
/// the covariance is not singular by construction.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> sample_mean_cov(const Eigen::MatrixXd& stats);

/// Escalating diagonal jitter: delta * max(trace/d, 1) * I for
/// delta in {0, 1e-8, ..., 1e-4}, stopping at the first Cholesky success.
inline constexpr double kJitterDeltas[] = {0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4};

/// Gaussian log-density at s, applying the jitter ladder when the covariance
/// does not factorize. On return, *sigma_used (when non-null) holds the
/// matrix actually factorized and *delta_used the jitter level. Throws
/// SingularCovariance when even the maximum jitter fails.
double gaussian_logdensity(const Eigen::VectorXd& s, const Eigen::VectorXd& mu,
                           const Eigen::MatrixXd& sigma,
                           Eigen::MatrixXd* sigma_used = nullptr,
                           double* delta_used = nullptr);

/// Box-style synthetic likelihood estimate: m simulations at the bound
/// parameters, sample mean/covariance, Gaussian log-density at s_obs.
/// Replicate i uses the stream derived from (seed, i), so results are
/// identical for any thread count.
SynlikFit sl_estimate(const StatSimulator& simulate, const Eigen::VectorXd& s_obs, int m,
                      std::uint64_t seed, const SynlikOptions& options = {});

}  // namespace ssinfer
