#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ssinfer/ssm.hpp"

namespace ssinfer {

enum class LikMethod { SIR, SL };

/// Noisy log-likelihood value with provenance and simulation budget.
struct LogLikEstimate {
    double value = 0.0;  // log scale; finite or -inf
    LikMethod method = LikMethod::SIR;
    int budget = 0;
    std::uint64_t seed = 0;
    int fail_index = -1;  // observation index where all weights vanished
};

/// Particle population at one filter step.
struct ParticleSet {
    Eigen::MatrixXd states;  // one column per particle
    Eigen::VectorXd raw_weights;
    Eigen::VectorXd norm_weights;

    /// norm_weights = raw_weights / sum(raw_weights); raises DegenerateFilter
    /// when every raw weight is zero.
    void normalize();
};

/// m indices drawn i.i.d. with the given (normalized) probabilities.
/// All-zero weights raise DegenerateFilter.
std::vector<int> multinomial_resample(const Eigen::VectorXd& weights, int m,
                                      std::uint64_t seed);

struct PfStepDiag {
    double ess = 0.0;
    double log_increment = 0.0;
};

/// SIR filter estimate of log p(y_{1:T}): multinomial resampling at every
/// step, log increments accumulated through a log-sum-exp.
LogLikEstimate sir_loglik(const SsmModel& model, int m, std::uint64_t seed,
                          std::vector<PfStepDiag>* diag = nullptr);

/// c independent filters with m_total/c particles each, averaged on the
/// natural scale. Replicate j runs on the stream derived from (seed, j).
LogLikEstimate averaged_loglik(const SsmModel& model, int m_total, int c,
                               std::uint64_t seed, int threads = 1);

}  // namespace ssinfer
