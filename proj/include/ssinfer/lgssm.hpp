#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "ssinfer/trajectory.hpp"

namespace ssinfer {

/// Scalar linear-Gaussian state space model, used as an exact-likelihood
/// oracle for the particle filter:
///   x_1 ~ N(m0, p0),  x_t = a x_{t-1} + N(0, q),  y_t = c x_t + N(0, r).
struct LgSsmParams {
    double a_coef = 0.9;
    double c_coef = 1.0;
    double q_var = 0.5;
    double r_var = 0.8;
    double m0 = 0.0;
    double p0 = 1.0;
    void validate() const;
};

Trajectory lg_ssm_simulate(const LgSsmParams& params, int T, std::uint64_t seed);

/// Exact log p(y_{1:T}) by the standard Kalman prediction/update recursion.
double kalman_loglik(const LgSsmParams& params, const Eigen::VectorXd& y);

}  // namespace ssinfer
