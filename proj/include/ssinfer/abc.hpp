#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ssinfer/mcmc.hpp"
#include "ssinfer/priors.hpp"
#include "ssinfer/summaries.hpp"

namespace ssinfer {

struct AbcRejectionResult {
    Eigen::MatrixXd accepted;        // N x k parameter rows
    Eigen::VectorXd distances;       // distances of the accepted draws
    long n_proposed = 0;
    long n_failed = 0;               // simulator failures (count as rejections)
    bool empty_warning = false;
};

/// Rejection ABC: m_total prior draws, squared Mahalanobis distance with
/// scaling matrix a, keep distances strictly below h. h = 0 is allowed and
/// yields an empty set. Requires a proper prior.
AbcRejectionResult abc_rejection(const PriorSpec& prior, const SummarySimulator& simulate,
                                 const Eigen::VectorXd& s_obs, long m_total, double h,
                                 const ScalingMatrix& a, std::uint64_t seed,
                                 int threads = 1);

/// One sequential-ABC population.
struct AbcPopulation {
    Eigen::MatrixXd particles;    // n x k
    Eigen::VectorXd weights;      // normalized importance weights
    Eigen::VectorXd distances;
    double tolerance = 0.0;       // +inf for the prior-predictive round
    double acceptance_ratio = 0.0;
    long n_sims = 0;
    bool truncated = false;       // round hit the simulation budget
};

struct SmcAbcOptions {
    /// Per-round simulation cap; 0 means 1000 * n_pop.
    long max_sims_per_round = 0;
    int max_rounds = 200;
    int threads = 1;
};

/// Sequential ABC with a shrinking tolerance: round 0 is the prior
/// predictive, each later tolerance is the median of the previous round's
/// accepted distances, particles move through a component-wise Gaussian
/// kernel with variance twice the previous population's weighted variance.
/// Stops once a round's acceptance ratio falls below stop_accept_ratio.
std::vector<AbcPopulation> smc_abc(const PriorSpec& prior, const SummarySimulator& simulate,
                                   const Eigen::VectorXd& s_obs, int n_pop,
                                   const ScalingMatrix& a, double stop_accept_ratio,
                                   std::uint64_t seed, const SmcAbcOptions& options = {});

struct ScalingExperimentRow {
    double v = 0.0;            // log r at which the scaling matrix was estimated
    int rep = 0;
    double final_tolerance = 0.0;
    int rounds = 0;
    long total_sims = 0;
};

struct ScalingExperimentConfig {
    int T = 50;
    double true_log_r = 3.8;
    double true_sigma2 = 0.3;
    double true_phi = 10.0;
    long n_cov_sims = 10000;  // simulations used to estimate the scaling matrix
    int n_pop = 200;
    double stop_accept_ratio = 0.01;
    PriorSpec prior;          // defaults to ricker_abc_prior()
    SmcAbcOptions smc;
};

/// Prior over (log r, sigma2, phi) used by the Ricker ABC experiments.
PriorSpec ricker_abc_prior();

/// For each grid value v: simulate observed data at the true parameters,
/// estimate the statistic covariance at (v, sigma2, phi), run SMC-ABC with
/// its inverse as scaling matrix, and record the lowest tolerance reached.
std::vector<ScalingExperimentRow> scaling_matrix_experiment(
    const Eigen::VectorXd& grid, int reps, const ScalingExperimentConfig& config,
    std::uint64_t seed);

}  // namespace ssinfer
