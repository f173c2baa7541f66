#pragma once

#include <Eigen/Dense>
#include <memory>
#include <utility>

#include "ssinfer/lgssm.hpp"
#include "ssinfer/rng.hpp"
#include "ssinfer/vole.hpp"

namespace ssinfer {

/// State space model as seen by the SIR filter: a prior for the initial
/// particles, a forward kernel per observation index, and the observation
/// log-density. States are stored one column per particle.
class SsmModel {
public:
    virtual ~SsmModel() = default;
    virtual int num_obs() const = 0;
    virtual int state_dim() const = 0;
    /// Fills states with draws from the initial-state prior.
    virtual void sample_initial(Eigen::MatrixXd& states, RngEngine& rng) const = 0;
    /// Advances all particles to observation index t (0-based). For t = 0
    /// this covers whatever happens between the initial draw and the first
    /// observation.
    virtual void propagate(int t, Eigen::MatrixXd& states, RngEngine& rng) const = 0;
    /// Log observation density of y_t under each particle.
    virtual void obs_logweights(int t, const Eigen::MatrixXd& states,
                                Eigen::VectorXd& logw) const = 0;
};

/// Linear-Gaussian model; the initial prior is the time-1 state prior
/// N(m0, p0), so kalman_loglik is the exact reference for the filter.
class LgSsm : public SsmModel {
public:
    LgSsm(const LgSsmParams& params, Eigen::VectorXd y);
    int num_obs() const override { return static_cast<int>(y_.size()); }
    int state_dim() const override { return 1; }
    void sample_initial(Eigen::MatrixXd& states, RngEngine& rng) const override;
    void propagate(int t, Eigen::MatrixXd& states, RngEngine& rng) const override;
    void obs_logweights(int t, const Eigen::MatrixXd& states,
                        Eigen::VectorXd& logw) const override;

private:
    LgSsmParams params_;
    Eigen::VectorXd y_;
};

/// Vole-weasel model with Poisson trapping counts. Initial particles are
/// drawn i.i.d. Uniform(init_lo, init_hi) per component one inter-observation
/// gap before the first observation, then integrated forward.
class VoleSsm : public SsmModel {
public:
    VoleSsm(const VoleParams& params, Eigen::VectorXd obs_times, Eigen::VectorXd y,
            double dt, std::pair<double, double> init_range = {0.01, 1.0});
    int num_obs() const override { return static_cast<int>(y_.size()); }
    int state_dim() const override { return 2; }
    void sample_initial(Eigen::MatrixXd& states, RngEngine& rng) const override;
    void propagate(int t, Eigen::MatrixXd& states, RngEngine& rng) const override;
    void obs_logweights(int t, const Eigen::MatrixXd& states,
                        Eigen::VectorXd& logw) const override;

private:
    VoleParams params_;
    Eigen::VectorXd obs_times_;
    Eigen::VectorXd y_;
    double dt_;
    double t_initial_;  // one gap before the first observation
    std::pair<double, double> init_range_;
};

}  // namespace ssinfer
