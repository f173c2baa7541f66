#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "ssinfer/params.hpp"
#include "ssinfer/priors.hpp"
#include "ssinfer/ssm.hpp"
#include "ssinfer/synlik.hpp"

namespace ssinfer {

enum class Transform { Identity, Log };

/// Component-wise Gaussian random walk on the transformed scale.
struct ProposalSpec {
    std::vector<Transform> transforms;
    Eigen::VectorXd steps;  // on the transformed scale, > 0 (or 0 for a null proposal)
    void validate() const;
    static ProposalSpec random_walk(int k, double step);
    /// Log transform for strictly positive parameters, identity otherwise.
    static ProposalSpec for_prior(const PriorSpec& prior, double step);
};

struct AdaptOptions {
    bool enable = true;    // tune step scale during burn-in only
    int batch = 50;
    double acc_low = 0.15;
    double acc_high = 0.30;
    double shrink = 0.8;
    double grow = 1.25;
};

struct Chain {
    std::vector<std::string> names;
    Eigen::MatrixXd draws;        // n_iter x k, natural scale, burn-in included
    Eigen::VectorXd loglik;       // plug-in trace
    std::vector<std::uint8_t> accept;
    int burn_in = 0;
    std::uint64_t seed = 0;
    Eigen::VectorXd final_steps;  // step sizes after adaptation froze

    double acceptance_rate() const;
    Eigen::MatrixXd post_burnin() const;
    void write_csv(std::ostream& out) const;  // iter, <params...>, loglik, accepted
};

/// Reads a chain written by Chain::write_csv; burn_in is not stored in the
/// file and must be supplied.
Chain read_chain_csv(const std::string& path, int burn_in);

/// Noisy log-likelihood plug-in: evaluated at theta with a caller-supplied
/// seed, so one evaluation is reproducible in isolation.
using LogLikPlugin = std::function<double(const Eigen::VectorXd& theta, std::uint64_t seed)>;

/// Log acceptance ratio of a symmetric random walk on the transformed scale;
/// the Jacobian terms make the chain target the natural-scale posterior.
double mh_log_accept(double loglik_prop, double loglik_cur, double logprior_prop,
                     double logprior_cur, double logjac_prop, double logjac_cur);

/// Metropolis-Hastings with a noisy plug-in likelihood. When refresh_current
/// is set the current position is re-estimated at every iteration.
Chain mh_chain(const LogLikPlugin& loglik, const PriorSpec& prior,
               const ProposalSpec& proposal, const ParamVec& init, int n_iter,
               int burn_in, bool refresh_current, std::uint64_t seed,
               const AdaptOptions& adapt = {});

/// Simulates one dataset at theta and returns its summary statistics.
using SummarySimulator =
    std::function<Eigen::VectorXd(const Eigen::VectorXd& theta, RngEngine& rng)>;

/// MH with a synthetic-likelihood plug-in (m simulations per evaluation).
Chain slmh(const SummarySimulator& simulate, const Eigen::VectorXd& s_obs, int m,
           const PriorSpec& prior, const ProposalSpec& proposal, const ParamVec& init,
           int n_iter, int burn_in, bool refresh_current, std::uint64_t seed,
           const SynlikOptions& options = {}, const AdaptOptions& adapt = {});

/// Builds the state space model at theta (observations bound inside).
using SsmFactory = std::function<std::unique_ptr<SsmModel>(const Eigen::VectorXd& theta)>;

/// Particle marginal MH: the plug-in is the averaged SIR estimate with
/// m_total particles split over c replicate filters. refresh_current stays
/// off so the pseudo-marginal target is preserved.
Chain pmmh(const SsmFactory& factory, int m_total, int c, const PriorSpec& prior,
           const ProposalSpec& proposal, const ParamVec& init, int n_iter, int burn_in,
           std::uint64_t seed, int threads = 1, const AdaptOptions& adapt = {});

}  // namespace ssinfer
