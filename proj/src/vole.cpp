#include "ssinfer/vole.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ssinfer/errors.hpp"

namespace ssinfer {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double frac(double t) { return t - std::floor(t); }
}  // namespace

void VoleParams::validate() const {
    if (!(r > 0.0)) throw std::invalid_argument("VoleParams: r must be > 0");
    if (!std::isfinite(e)) throw std::invalid_argument("VoleParams: e must be finite");
    if (!(g >= 0.0)) throw std::invalid_argument("VoleParams: g must be >= 0");
    if (!(h > 0.0)) throw std::invalid_argument("VoleParams: h must be > 0");
    if (!(a > 0.0)) throw std::invalid_argument("VoleParams: a must be > 0");
    if (!(d > 0.0)) throw std::invalid_argument("VoleParams: d must be > 0");
    if (!(s > 0.0)) throw std::invalid_argument("VoleParams: s must be > 0");
    if (!(sigma >= 0.0)) throw std::invalid_argument("VoleParams: sigma must be >= 0");
    if (!(phi > 0.0)) throw std::invalid_argument("VoleParams: phi must be > 0");
}

void DimensionalVoleParams::validate() const {
    if (!(r > 0.0 && s > 0.0 && K > 0.0 && G > 0.0 && H > 0.0 && C > 0.0 && D > 0.0 &&
          Q > 0.0 && Phi > 0.0 && sigma >= 0.0))
        throw std::invalid_argument("DimensionalVoleParams: positivity violated");
    if (!std::isfinite(e)) throw std::invalid_argument("DimensionalVoleParams: e must be finite");
}

VoleParams rescale_dimensional(const DimensionalVoleParams& p) {
    p.validate();
    VoleParams out;
    out.r = p.r;
    out.e = p.e;
    out.g = p.G / p.K;
    out.h = p.H / p.K;
    out.a = p.C / p.K;
    out.d = p.D / p.K;
    out.s = p.s;
    out.sigma = p.sigma;
    out.phi = p.Phi * p.K;
    return out;
}

DimensionalVoleParams make_dimensional(const VoleParams& p, double K, double Q) {
    if (!(K > 0.0)) throw std::invalid_argument("make_dimensional: K must be > 0");
    if (!(Q > 0.0)) throw std::invalid_argument("make_dimensional: Q must be > 0");
    p.validate();
    DimensionalVoleParams out;
    out.r = p.r;
    out.e = p.e;
    out.s = p.s;
    out.K = K;
    out.G = p.g * K;
    out.H = p.h * K;
    out.C = p.a * K;
    out.D = p.d * K;
    out.Q = Q;
    out.Phi = p.phi / K;
    out.sigma = p.sigma;
    return out;
}

long vole_integrate_batch(const VoleParams& params, double t0, double t1, int nsteps,
                          Eigen::Ref<Eigen::MatrixXd> states, RngEngine* rng) {
    if (states.rows() != 2)
        throw std::invalid_argument("vole_integrate_batch: states must have 2 rows");
    if (nsteps < 1) throw std::invalid_argument("vole_integrate_batch: nsteps must be >= 1");
    if (!(t1 > t0)) throw std::invalid_argument("vole_integrate_batch: need t1 > t0");

    const double hstep = (t1 - t0) / nsteps;
    const double sqrt_h = std::sqrt(hstep);
    const long m = states.cols();
    const bool noisy = rng != nullptr && params.sigma > 0.0;
    std::normal_distribution<double> std_normal(0.0, 1.0);

    // Seasonal phase advanced by rotation; segments are short enough that
    // the accumulated drift stays far below the Euler error.
    double cos_t = std::cos(kTwoPi * frac(t0));
    double sin_t = std::sin(kTwoPi * frac(t0));
    const double cos_h = std::cos(kTwoPi * hstep);
    const double sin_h = std::sin(kTwoPi * hstep);

    const double r = params.r, e = params.e, g = params.g, hh = params.h * params.h,
                 a = params.a, d = params.d, s = params.s, sig = params.sigma;
    long clamps = 0;

    for (int k = 0; k < nsteps; ++k) {
        const double season = 1.0 - e * sin_t;
        for (long i = 0; i < m; ++i) {
            double n = states(0, i);
            double p = states(1, i);
            const double n2 = n * n;
            const double drift_n =
                r * season * n - r * n2 - g * n2 / (n2 + hh) - a * n * p / (n + d);
            const double drift_p = s * season * p - s * p * p / n;
            double n_next = n + drift_n * hstep;
            if (noisy) n_next += sig * n * sqrt_h * std_normal(*rng);
            double p_next = p + drift_p * hstep;
            if (!std::isfinite(n_next) || !std::isfinite(p_next))
                throw SimulationFailure("vole integration: non-finite state", k);
            if (n_next < kVoleStateFloor) {
                n_next = kVoleStateFloor;
                ++clamps;
            }
            if (p_next < kVoleStateFloor) {
                p_next = kVoleStateFloor;
                ++clamps;
            }
            states(0, i) = n_next;
            states(1, i) = p_next;
        }
        const double c_new = cos_t * cos_h - sin_t * sin_h;
        sin_t = sin_t * cos_h + cos_t * sin_h;
        cos_t = c_new;
    }
    return clamps;
}

namespace {
int segment_steps(double gap, double dt) {
    const int n = static_cast<int>(std::llround(gap / dt));
    return n < 1 ? 1 : n;
}
}  // namespace

Trajectory vole_simulate(const VoleParams& params, const Eigen::VectorXd& obs_times,
                         double dt, double warmup, std::pair<double, double> init,
                         std::uint64_t seed) {
    RngEngine rng = make_rng(seed);
    Trajectory traj = vole_simulate(params, obs_times, dt, warmup, init, rng);
    traj.seed = seed;
    return traj;
}

Trajectory vole_simulate(const VoleParams& params, const Eigen::VectorXd& obs_times,
                         double dt, double warmup, std::pair<double, double> init,
                         RngEngine& rng) {
    params.validate();
    if (obs_times.size() == 0) throw std::invalid_argument("vole_simulate: empty obs_times");
    if (!(dt > 0.0)) throw std::invalid_argument("vole_simulate: dt must be > 0");
    if (!(warmup >= 0.0)) throw std::invalid_argument("vole_simulate: warmup must be >= 0");
    if (!(init.first > 0.0 && init.second > 0.0))
        throw std::invalid_argument("vole_simulate: initial states must be > 0");
    for (long k = 1; k < obs_times.size(); ++k)
        if (!(obs_times[k] > obs_times[k - 1]))
            throw std::invalid_argument("vole_simulate: obs_times must be strictly increasing");

    const long T = obs_times.size();

    Trajectory traj;
    traj.state_names = {"n", "p"};
    traj.times = obs_times;
    traj.latent.resize(T, 2);
    traj.obs.resize(T);

    Eigen::MatrixXd state(2, 1);
    state(0, 0) = init.first;
    state(1, 0) = init.second;
    long clamps = 0;

    for (long k = 0; k < T; ++k) {
        try {
            if (k == 0) {
                if (warmup > 0.0) {
                    clamps += vole_integrate_batch(params, obs_times[0] - warmup, obs_times[0],
                                                   segment_steps(warmup, dt), state, &rng);
                }
            } else {
                const double gap = obs_times[k] - obs_times[k - 1];
                clamps += vole_integrate_batch(params, obs_times[k - 1], obs_times[k],
                                               segment_steps(gap, dt), state, &rng);
            }
        } catch (const SimulationFailure&) {
            throw SimulationFailure("vole_simulate: non-finite state", k);
        }
        const double n = state(0, 0);
        const double lambda = params.phi * n;
        traj.latent(k, 0) = n;
        traj.latent(k, 1) = state(1, 0);
        traj.obs[k] =
            lambda > 0.0 ? static_cast<double>(std::poisson_distribution<long>(lambda)(rng)) : 0.0;
    }
    traj.clamp_events = static_cast<int>(clamps);
    return traj;
}

SkeletonPath vole_skeleton(const VoleParams& params, double t0, double horizon, double dt,
                           std::pair<double, double> init) {
    params.validate();
    if (!(horizon >= 0.0)) throw std::invalid_argument("vole_skeleton: horizon must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("vole_skeleton: dt must be > 0");
    if (!(init.first > 0.0 && init.second > 0.0))
        throw std::invalid_argument("vole_skeleton: initial states must be > 0");

    const long n_steps = horizon > 0.0 ? std::max<long>(1, std::llround(horizon / dt)) : 0;
    SkeletonPath path;
    path.times.resize(n_steps + 1);
    path.states.resize(n_steps + 1, 2);
    path.times[0] = t0;
    path.states(0, 0) = init.first;
    path.states(0, 1) = init.second;

    Eigen::MatrixXd state(2, 1);
    state(0, 0) = init.first;
    state(1, 0) = init.second;
    const double hstep = horizon > 0.0 ? horizon / n_steps : 0.0;
    for (long k = 1; k <= n_steps; ++k) {
        const double a = t0 + (k - 1) * hstep;
        const double b = t0 + k * hstep;
        path.clamp_events += vole_integrate_batch(params, a, b, 1, state, nullptr);
        path.times[k] = b;
        path.states(k, 0) = state(0, 0);
        path.states(k, 1) = state(1, 0);
    }
    return path;
}

Eigen::VectorXd semiannual_obs_times(int first_year, int n_years) {
    if (n_years < 1) throw std::invalid_argument("semiannual_obs_times: n_years must be >= 1");
    Eigen::VectorXd times(2 * n_years);
    for (int y = 0; y < n_years; ++y) {
        times[2 * y] = first_year + y + 0.45;
        times[2 * y + 1] = first_year + y + 0.70;
    }
    return times;
}

VoleParams vole_study_truth() {
    VoleParams p;
    p.r = 4.5;
    p.e = 0.8;
    p.g = 0.2;
    p.h = 0.15;
    p.a = 8.0;
    p.d = 0.06;
    p.s = 1.0;
    p.sigma = 1.5;
    p.phi = 100.0;
    return p;
}

VoleParams vole_params_from_vector(const Eigen::VectorXd& theta) {
    if (theta.size() != 9)
        throw std::invalid_argument("vole_params_from_vector: need 9 components");
    VoleParams p;
    p.r = theta[0];
    p.e = theta[1];
    p.g = theta[2];
    p.h = theta[3];
    p.a = theta[4];
    p.d = theta[5];
    p.s = theta[6];
    p.sigma = theta[7];
    p.phi = theta[8];
    return p;
}

Eigen::VectorXd vole_params_to_vector(const VoleParams& p) {
    Eigen::VectorXd v(9);
    v << p.r, p.e, p.g, p.h, p.a, p.d, p.s, p.sigma, p.phi;
    return v;
}

}  // namespace ssinfer
