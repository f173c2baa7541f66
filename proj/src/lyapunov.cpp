#include "ssinfer/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <vector>
#include <random>
#include <stdexcept>

#include "ssinfer/errors.hpp"
#include "ssinfer/parallel.hpp"

namespace ssinfer {

VoleSkeletonFlow::VoleSkeletonFlow(const VoleParams& params, double dt)
    : params_(params), dt_(dt) {
    params_.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("VoleSkeletonFlow: dt must be > 0");
    steps_per_unit_ = std::max(1, static_cast<int>(std::llround(unit_time() / dt)));
}

void VoleSkeletonFlow::advance(Eigen::VectorXd& x, double t, long n_units) const {
    if (n_units <= 0) return;
    Eigen::MatrixXd state(2, 1);
    state(0, 0) = x[0];
    state(1, 0) = x[1];
    const double span = n_units * unit_time();
    vole_integrate_batch(params_, t, t + span,
                         static_cast<int>(n_units * steps_per_unit_), state, nullptr);
    x[0] = state(0, 0);
    x[1] = state(1, 0);
}

void LogisticMapFlow::advance(Eigen::VectorXd& x, double, long n_units) const {
    double v = x[0];
    for (long i = 0; i < n_units; ++i) v = r_ * v * (1.0 - v);
    x[0] = v;
}

LyapunovResult lyapunov_max(const Flow& flow, const Eigen::VectorXd& x0, double t0,
                            long transient_units, long horizon_units, int tau_units,
                            std::uint64_t seed, double delta0) {
    if (x0.size() != flow.dim()) throw std::invalid_argument("lyapunov_max: state dimension");
    if (horizon_units < 1) throw std::invalid_argument("lyapunov_max: horizon must be >= 1");
    if (tau_units < 1) throw std::invalid_argument("lyapunov_max: tau must be >= 1");
    if (!(delta0 > 0.0)) throw std::invalid_argument("lyapunov_max: delta0 must be > 0");

    Eigen::VectorXd x = x0;
    double t = t0;
    if (transient_units > 0) {
        flow.advance(x, t, transient_units);
        t += transient_units * flow.unit_time();
    }

    // Seeded random unit vector; the leading direction takes over after a
    // few renormalizations anyway.
    RngEngine rng = make_rng(seed, 0x17a);
    std::normal_distribution<double> std_normal(0.0, 1.0);
    Eigen::VectorXd dir(x.size());
    do {
        for (long i = 0; i < dir.size(); ++i) dir[i] = std_normal(rng);
    } while (dir.norm() == 0.0);
    dir /= dir.norm();

    Eigen::VectorXd companion = x + delta0 * dir;
    const long n_renorms = horizon_units / tau_units;
    if (n_renorms < 1) throw std::invalid_argument("lyapunov_max: horizon shorter than tau");

    double sum_log = 0.0;
    for (long k = 0; k < n_renorms; ++k) {
        flow.advance(x, t, tau_units);
        flow.advance(companion, t, tau_units);
        t += tau_units * flow.unit_time();
        if (!x.allFinite() || !companion.allFinite())
            throw SimulationFailure("lyapunov_max: trajectory diverged", k);
        double delta = (companion - x).norm();
        if (delta < 1e-300) delta = 1e-300;  // fully collapsed companion
        sum_log += std::log(delta / delta0);
        companion = x + (delta0 / delta) * (companion - x);
    }

    LyapunovResult result;
    result.transient_units = transient_units;
    result.horizon_units = horizon_units;
    result.renorm_interval = tau_units;
    result.lambda_max =
        sum_log / (static_cast<double>(n_renorms) * tau_units * flow.unit_time());
    return result;
}

LyapunovResult vole_lyapunov(const VoleParams& params, long transient_months,
                             long horizon_months, double dt, std::uint64_t seed) {
    const VoleSkeletonFlow flow(params, dt);
    Eigen::VectorXd x0(2);
    x0 << 0.5, 0.1;
    return lyapunov_max(flow, x0, 0.0, transient_months, horizon_months, 1, seed);
}

Eigen::VectorXd lyapunov_posterior(const Chain& chain, int n_draws, long transient_months,
                                   long horizon_months, double dt, std::uint64_t seed,
                                   int threads) {
    const Eigen::MatrixXd post = chain.post_burnin();
    if (post.rows() < n_draws)
        throw std::invalid_argument("lyapunov_posterior: not enough post-burn-in rows");
    if (n_draws < 1) throw std::invalid_argument("lyapunov_posterior: n_draws must be >= 1");

    // Uniformly sampled row indices, drawn once up front.
    RngEngine rng = make_rng(seed, 0xdaa);
    std::uniform_int_distribution<long> pick(0, post.rows() - 1);
    std::vector<long> rows(n_draws);
    for (int i = 0; i < n_draws; ++i) rows[i] = pick(rng);

    auto index_of = [&](const char* name) {
        for (size_t i = 0; i < chain.names.size(); ++i)
            if (chain.names[i] == name) return static_cast<int>(i);
        throw std::invalid_argument(std::string("lyapunov_posterior: chain lacks '") + name +
                                    "'");
    };
    const int ir = index_of("r"), ie = index_of("e"), ig = index_of("g"), ih = index_of("h"),
              ia = index_of("a"), id = index_of("d"), is = index_of("s");

    Eigen::VectorXd lambdas(n_draws);
    parallel_for(n_draws, threads, [&](long i) {
        VoleParams p;
        p.r = post(rows[i], ir);
        p.e = post(rows[i], ie);
        p.g = post(rows[i], ig);
        p.h = post(rows[i], ih);
        p.a = post(rows[i], ia);
        p.d = post(rows[i], id);
        p.s = post(rows[i], is);
        p.sigma = 0.0;  // skeleton: noise-free by definition
        p.phi = 1.0;    // irrelevant to the latent dynamics
        try {
            lambdas[i] = vole_lyapunov(p, transient_months, horizon_months, dt,
                                       derive_seed(seed, static_cast<std::uint64_t>(i)))
                             .lambda_max;
        } catch (const std::exception&) {
            lambdas[i] = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return lambdas;
}

}  // namespace ssinfer
