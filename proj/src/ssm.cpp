#include "ssinfer/ssm.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ssinfer/statutil.hpp"

namespace ssinfer {

LgSsm::LgSsm(const LgSsmParams& params, Eigen::VectorXd y)
    : params_(params), y_(std::move(y)) {
    params_.validate();
    if (y_.size() < 1) throw std::invalid_argument("LgSsm: empty observation series");
}

void LgSsm::sample_initial(Eigen::MatrixXd& states, RngEngine& rng) const {
    std::normal_distribution<double> std_normal(0.0, 1.0);
    const double sd = std::sqrt(params_.p0);
    for (long i = 0; i < states.cols(); ++i) states(0, i) = params_.m0 + sd * std_normal(rng);
}

void LgSsm::propagate(int t, Eigen::MatrixXd& states, RngEngine& rng) const {
    if (t == 0) return;  // initial draw already sits at the first observation
    std::normal_distribution<double> std_normal(0.0, 1.0);
    const double sd = std::sqrt(params_.q_var);
    for (long i = 0; i < states.cols(); ++i)
        states(0, i) = params_.a_coef * states(0, i) + sd * std_normal(rng);
}

void LgSsm::obs_logweights(int t, const Eigen::MatrixXd& states, Eigen::VectorXd& logw) const {
    constexpr double kLog2Pi = 1.8378770664093454835606594728112;
    const double y = y_[t];
    const double log_r = std::log(params_.r_var);
    for (long i = 0; i < states.cols(); ++i) {
        const double v = y - params_.c_coef * states(0, i);
        logw[i] = -0.5 * (kLog2Pi + log_r + v * v / params_.r_var);
    }
}

VoleSsm::VoleSsm(const VoleParams& params, Eigen::VectorXd obs_times, Eigen::VectorXd y,
                 double dt, std::pair<double, double> init_range)
    : params_(params),
      obs_times_(std::move(obs_times)),
      y_(std::move(y)),
      dt_(dt),
      init_range_(init_range) {
    params_.validate();
    if (obs_times_.size() != y_.size() || y_.size() == 0)
        throw std::invalid_argument("VoleSsm: obs_times/y mismatch or empty");
    if (!(dt_ > 0.0)) throw std::invalid_argument("VoleSsm: dt must be > 0");
    if (!(init_range_.first > 0.0 && init_range_.second > init_range_.first))
        throw std::invalid_argument("VoleSsm: bad initial-state range");
    const double gap =
        obs_times_.size() > 1 ? obs_times_[1] - obs_times_[0] : 1.0;
    t_initial_ = obs_times_[0] - gap;
}

void VoleSsm::sample_initial(Eigen::MatrixXd& states, RngEngine& rng) const {
    std::uniform_real_distribution<double> unif(init_range_.first, init_range_.second);
    for (long i = 0; i < states.cols(); ++i) {
        states(0, i) = unif(rng);
        states(1, i) = unif(rng);
    }
}

void VoleSsm::propagate(int t, Eigen::MatrixXd& states, RngEngine& rng) const {
    const double from = t == 0 ? t_initial_ : obs_times_[t - 1];
    const double to = obs_times_[t];
    const int nsteps = std::max(1, static_cast<int>(std::llround((to - from) / dt_)));
    vole_integrate_batch(params_, from, to, nsteps, states, &rng);
}

void VoleSsm::obs_logweights(int t, const Eigen::MatrixXd& states,
                             Eigen::VectorXd& logw) const {
    const double y = y_[t];
    const double lgamma_term = std::lgamma(y + 1.0);
    for (long i = 0; i < states.cols(); ++i) {
        const double lambda = params_.phi * states(0, i);
        if (lambda <= 0.0) {
            logw[i] = y == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
        } else {
            logw[i] = y * std::log(lambda) - lambda - lgamma_term;
        }
    }
}

}  // namespace ssinfer
