#include "ssinfer/abc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ssinfer/errors.hpp"
#include "ssinfer/parallel.hpp"
#include "ssinfer/ricker.hpp"
#include "ssinfer/statutil.hpp"

namespace ssinfer {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

AbcRejectionResult abc_rejection(const PriorSpec& prior, const SummarySimulator& simulate,
                                 const Eigen::VectorXd& s_obs, long m_total, double h,
                                 const ScalingMatrix& a, std::uint64_t seed, int threads) {
    prior.validate();
    if (!prior.proper())
        throw std::invalid_argument("abc_rejection: prior must be proper (sampleable)");
    if (m_total < 1) throw std::invalid_argument("abc_rejection: m_total must be >= 1");
    if (!(h >= 0.0)) throw std::invalid_argument("abc_rejection: tolerance must be >= 0");

    const int k = prior.size();
    Eigen::MatrixXd thetas(m_total, k);
    Eigen::VectorXd dist(m_total);
    std::vector<char> failed(m_total, 0);

    parallel_for(m_total, threads, [&](long i) {
        RngEngine rng = make_rng(seed, static_cast<std::uint64_t>(i));
        const Eigen::VectorXd theta = prior.sample(rng);
        thetas.row(i) = theta.transpose();
        try {
            const Eigen::VectorXd s = simulate(theta, rng);
            dist[i] = s.allFinite() ? mahalanobis_sq(s_obs, s, a) : kInf;
        } catch (const SimulationFailure&) {
            failed[i] = 1;
            dist[i] = kInf;
        }
    });

    AbcRejectionResult out;
    out.n_proposed = m_total;
    std::vector<long> keep;
    for (long i = 0; i < m_total; ++i) {
        out.n_failed += failed[i];
        if (dist[i] < h) keep.push_back(i);
    }
    out.accepted.resize(static_cast<long>(keep.size()), k);
    out.distances.resize(static_cast<long>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) {
        out.accepted.row(static_cast<long>(j)) = thetas.row(keep[j]);
        out.distances[static_cast<long>(j)] = dist[keep[j]];
    }
    out.empty_warning = keep.empty();
    return out;
}

namespace {

struct ProposalOutcome {
    Eigen::VectorXd theta;
    double distance = kInf;
    bool accepted = false;
};

/// Draws one SMC-ABC candidate: resample an ancestor, perturb, simulate.
/// Candidates outside the prior support are redrawn without simulating.
ProposalOutcome smc_propose(const PriorSpec& prior, const SummarySimulator& simulate,
                            const Eigen::VectorXd& s_obs, const ScalingMatrix& a,
                            const AbcPopulation& prev, const Eigen::VectorXd& pert_sd,
                            const Eigen::VectorXd& cum_weights, double h,
                            std::uint64_t proposal_seed) {
    RngEngine rng = make_rng(proposal_seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> std_normal(0.0, 1.0);
    const int k = prior.size();

    ProposalOutcome out;
    out.theta.resize(k);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double u = unif(rng) * cum_weights[cum_weights.size() - 1];
        const double* pos =
            std::upper_bound(cum_weights.data(), cum_weights.data() + cum_weights.size(), u);
        long anc = pos - cum_weights.data();
        if (anc >= cum_weights.size()) anc = cum_weights.size() - 1;
        for (int i = 0; i < k; ++i)
            out.theta[i] = prev.particles(anc, i) + pert_sd[i] * std_normal(rng);
        if (!prior.in_support(out.theta)) continue;
        try {
            const Eigen::VectorXd s = simulate(out.theta, rng);
            out.distance = s.allFinite() ? mahalanobis_sq(s_obs, s, a) : kInf;
        } catch (const SimulationFailure&) {
            out.distance = kInf;
        }
        out.accepted = out.distance < h;
        return out;
    }
    throw std::runtime_error("smc_abc: could not draw a candidate inside the prior support");
}

double smc_log_weight(const Eigen::VectorXd& theta, const PriorSpec& prior,
                      const AbcPopulation& prev, const Eigen::VectorXd& pert_sd) {
    // Standard sequential-ABC correction: prior density over the kernel
    // mixture around the previous population.
    const double log_prior = prior.log_density(theta);
    Eigen::VectorXd log_mix(prev.particles.rows());
    for (long j = 0; j < prev.particles.rows(); ++j) {
        double acc = std::log(prev.weights[j]);
        for (long i = 0; i < theta.size(); ++i) {
            const double z = (theta[i] - prev.particles(j, i)) / pert_sd[i];
            acc += -0.5 * z * z - std::log(pert_sd[i]) - 0.918938533204672741780329736406;
        }
        log_mix[j] = acc;
    }
    return log_prior - log_sum_exp(log_mix);
}

}  // namespace

std::vector<AbcPopulation> smc_abc(const PriorSpec& prior, const SummarySimulator& simulate,
                                   const Eigen::VectorXd& s_obs, int n_pop,
                                   const ScalingMatrix& a, double stop_accept_ratio,
                                   std::uint64_t seed, const SmcAbcOptions& options) {
    prior.validate();
    if (!prior.proper()) throw std::invalid_argument("smc_abc: prior must be proper");
    if (n_pop < 50) throw std::invalid_argument("smc_abc: population must be >= 50");
    if (!(stop_accept_ratio > 0.0 && stop_accept_ratio <= 1.0))
        throw std::invalid_argument("smc_abc: stop_accept_ratio must be in (0, 1]");

    const int k = prior.size();
    const long round_budget =
        options.max_sims_per_round > 0 ? options.max_sims_per_round : 1000L * n_pop;

    std::vector<AbcPopulation> populations;

    // Round 0: prior predictive, everything accepted at infinite tolerance.
    {
        AbcPopulation pop;
        pop.particles.resize(n_pop, k);
        pop.distances.resize(n_pop);
        pop.weights = Eigen::VectorXd::Constant(n_pop, 1.0 / n_pop);
        pop.tolerance = kInf;
        pop.acceptance_ratio = 1.0;
        pop.n_sims = n_pop;
        parallel_for(n_pop, options.threads, [&](long i) {
            RngEngine rng = make_rng(seed, 0, static_cast<std::uint64_t>(i));
            const Eigen::VectorXd theta = prior.sample(rng);
            pop.particles.row(i) = theta.transpose();
            try {
                const Eigen::VectorXd s = simulate(theta, rng);
                pop.distances[i] = s.allFinite() ? mahalanobis_sq(s_obs, s, a) : kInf;
            } catch (const SimulationFailure&) {
                pop.distances[i] = kInf;
            }
        });
        populations.push_back(std::move(pop));
    }

    for (int round = 1; round <= options.max_rounds; ++round) {
        const AbcPopulation& prev = populations.back();

        // Tolerance schedule: median of the previous accepted distances.
        Eigen::VectorXd finite_prev = prev.distances;
        const double h = lower_median(finite_prev);
        if (!std::isfinite(h) || h <= 0.0) break;  // distances collapsed; cannot shrink

        Eigen::VectorXd pert_sd(k);
        for (int i = 0; i < k; ++i) {
            const double var = weighted_variance(prev.particles.col(i), prev.weights);
            pert_sd[i] = std::sqrt(std::max(2.0 * var, 1e-24));
        }
        Eigen::VectorXd cum_weights(prev.weights.size());
        double acc = 0.0;
        for (long i = 0; i < prev.weights.size(); ++i) {
            acc += prev.weights[i];
            cum_weights[i] = acc;
        }

        AbcPopulation pop;
        pop.tolerance = h;
        std::vector<Eigen::VectorXd> accepted;
        std::vector<double> accepted_dist;
        long n_sims = 0;

        const int chunk = std::max(1, options.threads) * 8;
        std::vector<ProposalOutcome> outcomes(chunk);
        bool done = false;
        while (!done) {
            const long base = n_sims;
            const long this_chunk = std::min<long>(chunk, round_budget - base);
            if (this_chunk <= 0) {
                pop.truncated = true;
                break;
            }
            parallel_for(this_chunk, options.threads, [&](long j) {
                outcomes[j] = smc_propose(
                    prior, simulate, s_obs, a, prev, pert_sd, cum_weights, h,
                    derive_seed(seed, static_cast<std::uint64_t>(round),
                                static_cast<std::uint64_t>(base + j)));
            });
            for (long j = 0; j < this_chunk; ++j) {
                ++n_sims;
                if (outcomes[j].accepted) {
                    accepted.push_back(outcomes[j].theta);
                    accepted_dist.push_back(outcomes[j].distance);
                    if (static_cast<int>(accepted.size()) == n_pop) {
                        done = true;
                        break;
                    }
                }
            }
        }

        pop.n_sims = n_sims;
        pop.acceptance_ratio =
            n_sims > 0 ? static_cast<double>(accepted.size()) / n_sims : 0.0;
        if (accepted.empty()) break;  // tolerance h was never reached; keep the last achieved one

        const long n_acc = static_cast<long>(accepted.size());
        pop.particles.resize(n_acc, k);
        pop.distances.resize(n_acc);
        Eigen::VectorXd logw(n_acc);
        for (long i = 0; i < n_acc; ++i) {
            pop.particles.row(i) = accepted[i].transpose();
            pop.distances[i] = accepted_dist[i];
            logw[i] = smc_log_weight(accepted[i], prior, prev, pert_sd);
        }
        const double norm = log_sum_exp(logw);
        pop.weights = (logw.array() - norm).exp();
        populations.push_back(std::move(pop));

        if (populations.back().acceptance_ratio < stop_accept_ratio) break;
        if (populations.back().truncated) break;
    }
    return populations;
}

PriorSpec ricker_abc_prior() {
    PriorSpec spec;
    spec.names = {"log_r", "sigma2", "phi"};
    spec.components = {
        PriorComponent::normal(3.3, 0.5),
        PriorComponent::exponential(3.0),
        PriorComponent::gamma(25.0, 0.4),
    };
    return spec;
}

std::vector<ScalingExperimentRow> scaling_matrix_experiment(
    const Eigen::VectorXd& grid, int reps, const ScalingExperimentConfig& config,
    std::uint64_t seed) {
    if (grid.size() == 0)
        throw std::invalid_argument("scaling_matrix_experiment: empty grid");
    if (reps < 1) throw std::invalid_argument("scaling_matrix_experiment: reps must be >= 1");

    const PriorSpec prior =
        config.prior.components.empty() ? ricker_abc_prior() : config.prior;

    SummarySimulator simulate = [&](const Eigen::VectorXd& theta, RngEngine& rng) {
        RickerParams p{theta[0], theta[1], theta[2]};
        std::uniform_int_distribution<std::uint64_t> seeder;
        const Trajectory traj = ricker_simulate(p, config.T, 1.0, seeder(rng));
        return ricker_summaries(traj.obs).values;
    };

    std::vector<ScalingExperimentRow> rows;
    for (long kk = 0; kk < grid.size(); ++kk) {
        for (int rep = 0; rep < reps; ++rep) {
            const std::uint64_t run_seed =
                derive_seed(seed, static_cast<std::uint64_t>(kk), static_cast<std::uint64_t>(rep));

            // Observed data at the true parameters.
            RickerParams truth{config.true_log_r, config.true_sigma2, config.true_phi};
            const Trajectory y_obs =
                ricker_simulate(truth, config.T, 1.0, derive_seed(run_seed, 1));
            const Eigen::VectorXd s_obs = ricker_summaries(y_obs.obs).values;
            const int d = static_cast<int>(s_obs.size());

            // Scaling matrix estimated at (v, true sigma2, true phi).
            RickerParams at_v{grid[kk], config.true_sigma2, config.true_phi};
            Eigen::MatrixXd stats(config.n_cov_sims, d);
            parallel_for(config.n_cov_sims, config.smc.threads, [&](long i) {
                const Trajectory t = ricker_simulate(
                    at_v, config.T, 1.0, derive_seed(run_seed, 2, static_cast<std::uint64_t>(i)));
                stats.row(i) = ricker_summaries(t.obs).values.transpose();
            });
            auto [mu, sigma] = sample_mean_cov(stats);
            (void)mu;
            Eigen::LLT<Eigen::MatrixXd> llt(sigma);
            if (llt.info() != Eigen::Success) {
                sigma.diagonal().array() += 1e-8 * sigma.trace() / d;
                llt.compute(sigma);
                if (llt.info() != Eigen::Success)
                    throw SingularCovariance("scaling_matrix_experiment: covariance singular");
            }
            ScalingMatrix a;
            a.a = llt.solve(Eigen::MatrixXd::Identity(d, d));
            a.a = ((a.a + a.a.transpose()) / 2.0).eval();

            const auto populations =
                smc_abc(prior, simulate, s_obs, config.n_pop, a, config.stop_accept_ratio,
                        derive_seed(run_seed, 3), config.smc);

            ScalingExperimentRow row;
            row.v = grid[kk];
            row.rep = rep;
            row.rounds = static_cast<int>(populations.size());
            row.final_tolerance = populations.back().tolerance;
            for (const auto& pop : populations) row.total_sims += pop.n_sims;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace ssinfer
