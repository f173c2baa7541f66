#include "ssinfer/lgssm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ssinfer/rng.hpp"

namespace ssinfer {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

void LgSsmParams::validate() const {
    if (!(q_var > 0.0)) throw std::invalid_argument("LgSsmParams: q_var must be > 0");
    if (!(r_var > 0.0)) throw std::invalid_argument("LgSsmParams: r_var must be > 0");
    if (!(p0 > 0.0)) throw std::invalid_argument("LgSsmParams: p0 must be > 0");
}

Trajectory lg_ssm_simulate(const LgSsmParams& params, int T, std::uint64_t seed) {
    params.validate();
    if (T < 1) throw std::invalid_argument("lg_ssm_simulate: T must be >= 1");

    RngEngine rng = make_rng(seed);
    std::normal_distribution<double> std_normal(0.0, 1.0);

    Trajectory traj;
    traj.seed = seed;
    traj.state_names = {"x"};
    traj.times.resize(T);
    traj.latent.resize(T, 1);
    traj.obs.resize(T);

    double x = params.m0 + std::sqrt(params.p0) * std_normal(rng);
    for (int t = 1; t <= T; ++t) {
        if (t > 1) x = params.a_coef * x + std::sqrt(params.q_var) * std_normal(rng);
        const double y = params.c_coef * x + std::sqrt(params.r_var) * std_normal(rng);
        traj.times[t - 1] = t;
        traj.latent(t - 1, 0) = x;
        traj.obs[t - 1] = y;
    }
    return traj;
}

double kalman_loglik(const LgSsmParams& params, const Eigen::VectorXd& y) {
    params.validate();
    if (y.size() < 1) throw std::invalid_argument("kalman_loglik: empty observation series");

    double m = params.m0;
    double p = params.p0;
    double loglik = 0.0;
    for (long t = 0; t < y.size(); ++t) {
        if (t > 0) {
            m = params.a_coef * m;
            p = params.a_coef * params.a_coef * p + params.q_var;
        }
        const double innovation_var = params.c_coef * params.c_coef * p + params.r_var;
        const double v = y[t] - params.c_coef * m;
        loglik += -0.5 * (kLog2Pi + std::log(innovation_var) + v * v / innovation_var);
        const double gain = p * params.c_coef / innovation_var;
        m += gain * v;
        p = (1.0 - gain * params.c_coef) * p;
    }
    return loglik;
}

}  // namespace ssinfer
