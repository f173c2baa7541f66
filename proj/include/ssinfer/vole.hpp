#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "ssinfer/rng.hpp"
#include "ssinfer/trajectory.hpp"

namespace ssinfer {

/// Dimensionless prey-predator model with seasonal forcing:
///   dn/dt = r(1 - e sin 2πt)n - r n² - g n²/(n²+h²) - a n p/(n+d) + n dw/dt
///   dp/dt = s(1 - e sin 2πt)p - s p²/n
/// with Brownian volatility sigma on the prey equation only, and
/// Y_t ~ Poisson(phi n_t) at observation times.
struct VoleParams {
    double r;      // prey intrinsic growth, 1/year
    double e;      // seasonality amplitude (unconstrained sign)
    double g;      // generalist predation rate
    double h;      // generalist half saturation
    double a;      // weasel predation rate
    double d;      // weasel half saturation
    double s;      // weasel intrinsic growth, 1/year
    double sigma;  // Brownian volatility (>= 0; zero turns noise off)
    double phi;    // observation scaling
    void validate() const;
};

/// Parameters of the original dimensional system (states N, P).
struct DimensionalVoleParams {
    double r, e, s;
    double K;       // prey carrying capacity
    double G, H;    // generalist functional response
    double C, D;    // weasel functional response
    double Q;       // voles per weasel at equilibrium
    double Phi;     // dimensional observation scaling
    double sigma;
    void validate() const;
};

/// n = N/K, p = QP/K reduction: (g, h, a, d) = (G, H, C, D)/K, phi = Phi K.
VoleParams rescale_dimensional(const DimensionalVoleParams& p);

/// Inverse of rescale_dimensional for given K and Q.
DimensionalVoleParams make_dimensional(const VoleParams& p, double K, double Q);

/// Positivity floor applied to both states after every Euler step.
inline constexpr double kVoleStateFloor = 1e-6;

/// Euler-Maruyama integration of a batch of states (row 0 = n, row 1 = p;
/// one column per particle) over [t0, t1] in nsteps equal substeps. The
/// seasonal term is shared across the batch at each substep. rng == nullptr
/// or sigma == 0 integrates the deterministic skeleton. Returns the number
/// of clamps to the positivity floor.
long vole_integrate_batch(const VoleParams& params, double t0, double t1, int nsteps,
                          Eigen::Ref<Eigen::MatrixXd> states, RngEngine* rng);

/// Simulates the observed process on the given observation times.
/// Integrates a warm-up period of `warmup` years before the first
/// observation, starting from `init` = (n0, p0).
Trajectory vole_simulate(const VoleParams& params, const Eigen::VectorXd& obs_times,
                         double dt, double warmup, std::pair<double, double> init,
                         std::uint64_t seed);

/// Same model driven by an existing engine (seed field left zero).
Trajectory vole_simulate(const VoleParams& params, const Eigen::VectorXd& obs_times,
                         double dt, double warmup, std::pair<double, double> init,
                         RngEngine& rng);

/// Noise-free path of the reduced system on the grid t0 + i*dt.
struct SkeletonPath {
    Eigen::VectorXd times;
    Eigen::MatrixXd states;  // rows follow times; columns n, p
    long clamp_events = 0;
};

SkeletonPath vole_skeleton(const VoleParams& params, double t0, double horizon, double dt,
                           std::pair<double, double> init);

/// Trapping-season grid: spring = year + 0.45, autumn = year + 0.70,
/// for n_years consecutive years starting at first_year.
Eigen::VectorXd semiannual_obs_times(int first_year, int n_years);

/// Data-generating values of the simulation study.
VoleParams vole_study_truth();

/// Canonical parameter ordering (r, e, g, h, a, d, s, sigma, phi) shared by
/// priors, chains and serialized files.
VoleParams vole_params_from_vector(const Eigen::VectorXd& theta);
Eigen::VectorXd vole_params_to_vector(const VoleParams& p);

}  // namespace ssinfer
