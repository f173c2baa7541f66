#include "ssinfer/pfilter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ssinfer/errors.hpp"
#include "ssinfer/parallel.hpp"
#include "ssinfer/statutil.hpp"

namespace ssinfer {

void ParticleSet::normalize() {
    if (raw_weights.size() == 0)
        throw std::invalid_argument("ParticleSet::normalize: empty weights");
    if (raw_weights.minCoeff() < 0.0)
        throw std::invalid_argument("ParticleSet::normalize: negative raw weight");
    const double total = raw_weights.sum();
    if (total <= 0.0) throw DegenerateFilter("ParticleSet::normalize: all weights are zero");
    norm_weights = raw_weights / total;
}

std::vector<int> multinomial_resample(const Eigen::VectorXd& weights, int m,
                                      std::uint64_t seed) {
    const long n = weights.size();
    if (n == 0) throw std::invalid_argument("multinomial_resample: empty weights");
    if (m < 1) throw std::invalid_argument("multinomial_resample: m must be >= 1");
    if (weights.minCoeff() < 0.0)
        throw std::invalid_argument("multinomial_resample: negative weight");

    Eigen::VectorXd cum(n);
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
        acc += weights[i];
        cum[i] = acc;
    }
    if (acc <= 0.0) throw DegenerateFilter("multinomial_resample: all weights are zero");

    RngEngine rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<int> indices(m);
    for (int j = 0; j < m; ++j) {
        const double u = unif(rng) * acc;
        const double* pos = std::upper_bound(cum.data(), cum.data() + n, u);
        long idx = pos - cum.data();
        if (idx >= n) idx = n - 1;
        indices[j] = static_cast<int>(idx);
    }
    return indices;
}

LogLikEstimate sir_loglik(const SsmModel& model, int m, std::uint64_t seed,
                          std::vector<PfStepDiag>* diag) {
    if (m < 2) throw std::invalid_argument("sir_loglik: need at least 2 particles");
    const int T = model.num_obs();
    const int dim = model.state_dim();

    LogLikEstimate est;
    est.method = LikMethod::SIR;
    est.budget = m;
    est.seed = seed;
    if (diag) diag->clear();

    RngEngine rng = make_rng(seed, 0x5f1e);
    Eigen::MatrixXd states(dim, m);
    Eigen::MatrixXd resampled(dim, m);
    Eigen::VectorXd logw(m);
    Eigen::VectorXd w(m);

    model.sample_initial(states, rng);

    double loglik = 0.0;
    for (int t = 0; t < T; ++t) {
        model.propagate(t, states, rng);
        model.obs_logweights(t, states, logw);

        const double max_logw = logw.maxCoeff();
        if (!std::isfinite(max_logw)) {
            est.value = -std::numeric_limits<double>::infinity();
            est.fail_index = t;
            return est;
        }
        w = (logw.array() - max_logw).exp();
        const double wsum = w.sum();
        loglik += max_logw + std::log(wsum / m);

        if (diag) {
            PfStepDiag step;
            step.ess = wsum * wsum / w.squaredNorm();
            step.log_increment = max_logw + std::log(wsum / m);
            diag->push_back(step);
        }

        // Multinomial resampling at every step, drawn from this filter's
        // own stream to keep the whole run a function of (args, seed).
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Eigen::VectorXd cum(m);
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            acc += w[i];
            cum[i] = acc;
        }
        for (int j = 0; j < m; ++j) {
            const double u = unif(rng) * acc;
            const double* pos = std::upper_bound(cum.data(), cum.data() + m, u);
            long idx = pos - cum.data();
            if (idx >= m) idx = m - 1;
            resampled.col(j) = states.col(idx);
        }
        states.swap(resampled);
    }
    est.value = loglik;
    return est;
}

LogLikEstimate averaged_loglik(const SsmModel& model, int m_total, int c,
                               std::uint64_t seed, int threads) {
    if (c < 1) throw std::invalid_argument("averaged_loglik: c must be >= 1");
    if (m_total % c != 0)
        throw std::invalid_argument("averaged_loglik: c must divide m_total");
    const int m_each = m_total / c;

    Eigen::VectorXd values(c);
    std::vector<int> fail_index(c, -1);
    parallel_for(c, threads, [&](long j) {
        const LogLikEstimate one =
            sir_loglik(model, m_each, derive_seed(seed, static_cast<std::uint64_t>(j)));
        values[j] = one.value;
        fail_index[j] = one.fail_index;
    });

    LogLikEstimate est;
    est.method = LikMethod::SIR;
    est.budget = m_total;
    est.seed = seed;
    est.value = log_mean_exp(values);
    if (!std::isfinite(est.value)) {
        for (int j = 0; j < c; ++j)
            if (fail_index[j] >= 0) est.fail_index = fail_index[j];
    }
    return est;
}

}  // namespace ssinfer
