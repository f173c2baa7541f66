#include "ssinfer/mcmc.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "ssinfer/csv.hpp"
#include "ssinfer/errors.hpp"
#include "ssinfer/pfilter.hpp"

namespace ssinfer {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void ProposalSpec::validate() const {
    if (transforms.size() != static_cast<size_t>(steps.size()))
        throw std::invalid_argument("ProposalSpec: transforms/steps mismatch");
    for (long i = 0; i < steps.size(); ++i)
        if (!(steps[i] >= 0.0))
            throw std::invalid_argument("ProposalSpec: step sizes must be >= 0");
}

ProposalSpec ProposalSpec::random_walk(int k, double step) {
    ProposalSpec p;
    p.transforms.assign(k, Transform::Identity);
    p.steps = Eigen::VectorXd::Constant(k, step);
    return p;
}

ProposalSpec ProposalSpec::for_prior(const PriorSpec& prior, double step) {
    ProposalSpec p;
    p.steps = Eigen::VectorXd::Constant(prior.size(), step);
    p.transforms.resize(prior.size());
    for (int i = 0; i < prior.size(); ++i) {
        const auto& c = prior.components[i];
        const bool positive = c.lower >= 0.0;
        p.transforms[i] = positive ? Transform::Log : Transform::Identity;
    }
    return p;
}

double Chain::acceptance_rate() const {
    if (accept.empty()) return 0.0;
    double acc = 0.0;
    for (const auto f : accept) acc += f;
    return acc / static_cast<double>(accept.size());
}

Eigen::MatrixXd Chain::post_burnin() const {
    return draws.bottomRows(draws.rows() - burn_in);
}

void Chain::write_csv(std::ostream& out) const {
    std::vector<std::string> header;
    header.push_back("iter");
    for (const auto& n : names) header.push_back(n);
    header.push_back("loglik");
    header.push_back("accepted");
    Eigen::MatrixXd rows(draws.rows(), draws.cols() + 3);
    for (long i = 0; i < draws.rows(); ++i) {
        rows(i, 0) = static_cast<double>(i);
        rows(i, draws.cols() + 1) = loglik[i];
        rows(i, draws.cols() + 2) = accept[i];
    }
    rows.middleCols(1, draws.cols()) = draws;
    ssinfer::write_csv(out, header, rows);
}

Chain read_chain_csv(const std::string& path, int burn_in) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open chain file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty chain file", 1);
    const auto header = split_csv_line(line);
    if (header.size() < 4 || header.front() != "iter" || header.back() != "accepted" ||
        header[header.size() - 2] != "loglik")
        throw ParseError("unexpected chain header", 1);

    Chain chain;
    chain.burn_in = burn_in;
    chain.names.assign(header.begin() + 1, header.end() - 2);
    const int k = static_cast<int>(chain.names.size());

    std::vector<Eigen::VectorXd> rows;
    std::vector<double> lls;
    std::vector<std::uint8_t> accepts;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) throw ParseError("bad chain row", line_no);
        Eigen::VectorXd row(k);
        for (int j = 0; j < k; ++j) row[j] = std::stod(fields[j + 1]);
        rows.push_back(row);
        lls.push_back(std::stod(fields[k + 1]));
        accepts.push_back(static_cast<std::uint8_t>(std::stod(fields[k + 2]) != 0.0));
    }
    const long n = static_cast<long>(rows.size());
    if (n == 0) throw ParseError("chain file has no draws", line_no);
    if (burn_in < 0 || burn_in >= n)
        throw std::invalid_argument("read_chain_csv: burn_in out of range");
    chain.draws.resize(n, k);
    chain.loglik.resize(n);
    for (long i = 0; i < n; ++i) {
        chain.draws.row(i) = rows[i].transpose();
        chain.loglik[i] = lls[i];
    }
    chain.accept = std::move(accepts);
    return chain;
}

double mh_log_accept(double loglik_prop, double loglik_cur, double logprior_prop,
                     double logprior_cur, double logjac_prop, double logjac_cur) {
    return (loglik_prop + logprior_prop + logjac_prop) -
           (loglik_cur + logprior_cur + logjac_cur);
}

namespace {

double to_transformed(double x, Transform t) {
    return t == Transform::Log ? std::log(x) : x;
}

double from_transformed(double z, Transform t) {
    return t == Transform::Log ? std::exp(z) : z;
}

/// log |d theta / d z| accumulated over components; z is the transformed state.
double log_jacobian(const Eigen::VectorXd& z, const std::vector<Transform>& transforms) {
    double acc = 0.0;
    for (long i = 0; i < z.size(); ++i)
        if (transforms[i] == Transform::Log) acc += z[i];
    return acc;
}

}  // namespace

Chain mh_chain(const LogLikPlugin& loglik, const PriorSpec& prior,
               const ProposalSpec& proposal, const ParamVec& init, int n_iter,
               int burn_in, bool refresh_current, std::uint64_t seed,
               const AdaptOptions& adapt) {
    prior.validate();
    proposal.validate();
    const int k = prior.size();
    if (init.size() != k) throw std::invalid_argument("mh_chain: init dimension mismatch");
    if (proposal.steps.size() != k)
        throw std::invalid_argument("mh_chain: proposal dimension mismatch");
    if (n_iter <= burn_in || burn_in < 0)
        throw std::invalid_argument("mh_chain: need n_iter > burn_in >= 0");
    if (!prior.in_support(init.values))
        throw std::invalid_argument("mh_chain: init outside prior support");
    for (int i = 0; i < k; ++i)
        if (proposal.transforms[i] == Transform::Log && !(init.values[i] > 0.0))
            throw std::invalid_argument("mh_chain: log transform needs positive init");

    Chain chain;
    chain.names = init.names.empty() ? prior.names : init.names;
    chain.draws.resize(n_iter, k);
    chain.loglik.resize(n_iter);
    chain.accept.assign(n_iter, 0);
    chain.burn_in = burn_in;
    chain.seed = seed;

    RngEngine rng = make_rng(seed, 0x3c41);
    std::normal_distribution<double> std_normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uint64_t eval_counter = 0;
    auto next_eval_seed = [&]() { return derive_seed(seed, 0xe7a1, eval_counter++); };

    Eigen::VectorXd z(k), theta = init.values;
    for (int i = 0; i < k; ++i) z[i] = to_transformed(theta[i], proposal.transforms[i]);

    double cur_ll = loglik(theta, next_eval_seed());
    if (!std::isfinite(cur_ll))
        throw std::runtime_error("mh_chain: plug-in log-likelihood not finite at init");
    double cur_prior = prior.log_density(theta);
    double cur_jac = log_jacobian(z, proposal.transforms);

    Eigen::VectorXd steps = proposal.steps;
    int batch_accepts = 0;

    Eigen::VectorXd z_prop(k), theta_prop(k);
    for (int iter = 0; iter < n_iter; ++iter) {
        if (refresh_current) cur_ll = loglik(theta, next_eval_seed());

        for (int i = 0; i < k; ++i) z_prop[i] = z[i] + steps[i] * std_normal(rng);
        for (int i = 0; i < k; ++i)
            theta_prop[i] = from_transformed(z_prop[i], proposal.transforms[i]);

        const double prior_prop = prior.log_density(theta_prop);
        bool accepted = false;
        if (prior_prop > -kInf) {
            const double ll_prop = loglik(theta_prop, next_eval_seed());
            const double jac_prop = log_jacobian(z_prop, proposal.transforms);
            const double log_alpha =
                mh_log_accept(ll_prop, cur_ll, prior_prop, cur_prior, jac_prop, cur_jac);
            if (std::log(unif(rng)) <= log_alpha) {
                accepted = true;
                z = z_prop;
                theta = theta_prop;
                cur_ll = ll_prop;
                cur_prior = prior_prop;
                cur_jac = jac_prop;
            }
        }

        chain.draws.row(iter) = theta.transpose();
        chain.loglik[iter] = cur_ll;
        chain.accept[iter] = accepted ? 1 : 0;

        if (adapt.enable && iter < burn_in) {
            batch_accepts += accepted ? 1 : 0;
            if ((iter + 1) % adapt.batch == 0) {
                const double rate = batch_accepts / static_cast<double>(adapt.batch);
                if (rate < adapt.acc_low) steps *= adapt.shrink;
                else if (rate > adapt.acc_high) steps *= adapt.grow;
                batch_accepts = 0;
            }
        }
    }
    chain.final_steps = steps;
    return chain;
}

Chain slmh(const SummarySimulator& simulate, const Eigen::VectorXd& s_obs, int m,
           const PriorSpec& prior, const ProposalSpec& proposal, const ParamVec& init,
           int n_iter, int burn_in, bool refresh_current, std::uint64_t seed,
           const SynlikOptions& options, const AdaptOptions& adapt) {
    LogLikPlugin plugin = [&](const Eigen::VectorXd& theta, std::uint64_t eval_seed) {
        StatSimulator bound = [&, theta](RngEngine& rng) { return simulate(theta, rng); };
        return sl_estimate(bound, s_obs, m, eval_seed, options).log_sl;
    };
    return mh_chain(plugin, prior, proposal, init, n_iter, burn_in, refresh_current, seed,
                    adapt);
}

Chain pmmh(const SsmFactory& factory, int m_total, int c, const PriorSpec& prior,
           const ProposalSpec& proposal, const ParamVec& init, int n_iter, int burn_in,
           std::uint64_t seed, int threads, const AdaptOptions& adapt) {
    LogLikPlugin plugin = [&](const Eigen::VectorXd& theta, std::uint64_t eval_seed) {
        const std::unique_ptr<SsmModel> model = factory(theta);
        return averaged_loglik(*model, m_total, c, eval_seed, threads).value;
    };
    return mh_chain(plugin, prior, proposal, init, n_iter, burn_in,
                    /*refresh_current=*/false, seed, adapt);
}

}  // namespace ssinfer
