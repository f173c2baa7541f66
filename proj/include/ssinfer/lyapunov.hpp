#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "ssinfer/mcmc.hpp"
#include "ssinfer/vole.hpp"

namespace ssinfer {

/// Dynamical system advanced in integer time units (months for the vole
/// skeleton, iterations for discrete maps).
class Flow {
public:
    virtual ~Flow() = default;
    virtual int dim() const = 0;
    /// Advances x from absolute time t over n_units units.
    virtual void advance(Eigen::VectorXd& x, double t, long n_units) const = 0;
    /// Length of one unit in years (1 for discrete-map mode).
    virtual double unit_time() const = 0;
};

/// Deterministic vole-weasel skeleton; one unit = one month = 1/12 year.
class VoleSkeletonFlow : public Flow {
public:
    VoleSkeletonFlow(const VoleParams& params, double dt);
    int dim() const override { return 2; }
    void advance(Eigen::VectorXd& x, double t, long n_units) const override;
    double unit_time() const override { return 1.0 / 12.0; }

private:
    VoleParams params_;
    double dt_;
    int steps_per_unit_;
};

/// Logistic map x -> r x (1 - x); one unit = one iteration.
class LogisticMapFlow : public Flow {
public:
    explicit LogisticMapFlow(double r = 4.0) : r_(r) {}
    int dim() const override { return 1; }
    void advance(Eigen::VectorXd& x, double t, long n_units) const override;
    double unit_time() const override { return 1.0; }

private:
    double r_;
};

struct LyapunovResult {
    double lambda_max = 0.0;  // per year (per iteration in map mode)
    long transient_units = 0;
    long horizon_units = 0;
    int renorm_interval = 0;
};

/// Two-trajectory estimate of the maximal Lyapunov exponent: a companion
/// trajectory offset by delta0 in state norm is renormalized back onto the
/// separation direction every tau units; the averaged log stretching rate
/// is the exponent. The seed only randomizes the initial offset direction.
LyapunovResult lyapunov_max(const Flow& flow, const Eigen::VectorXd& x0, double t0,
                            long transient_units, long horizon_units, int tau_units,
                            std::uint64_t seed, double delta0 = 1e-8);

/// Exponent of the vole skeleton at the given parameters, with the
/// toolkit's default grid (dt) and tau = 1 month.
LyapunovResult vole_lyapunov(const VoleParams& params, long transient_months,
                             long horizon_months, double dt, std::uint64_t seed);

/// Exponents for n_draws parameter sets sampled from the post-burn-in
/// chain. Failed integrations are recorded as NaN.
Eigen::VectorXd lyapunov_posterior(const Chain& chain, int n_draws, long transient_months,
                                   long horizon_months, double dt, std::uint64_t seed,
                                   int threads = 1);

}  // namespace ssinfer
