#include "ssinfer/ricker.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ssinfer/errors.hpp"
#include "ssinfer/rng.hpp"

namespace ssinfer {

void RickerParams::validate() const {
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("RickerParams: sigma2 must be >= 0");
    if (!(phi > 0.0)) throw std::invalid_argument("RickerParams: phi must be > 0");
    if (!std::isfinite(log_r)) throw std::invalid_argument("RickerParams: log_r must be finite");
}

Trajectory ricker_simulate(const RickerParams& params, int T, double n0, std::uint64_t seed) {
    RngEngine rng = make_rng(seed);
    Trajectory traj = ricker_simulate(params, T, n0, rng);
    traj.seed = seed;
    return traj;
}

Trajectory ricker_simulate(const RickerParams& params, int T, double n0, RngEngine& rng) {
    params.validate();
    if (T < 1) throw std::invalid_argument("ricker_simulate: T must be >= 1");
    if (!(n0 >= 0.0)) throw std::invalid_argument("ricker_simulate: n0 must be >= 0");
    const double r = std::exp(params.log_r);
    const double sd = std::sqrt(params.sigma2);

    Trajectory traj;
    traj.state_names = {"n"};
    traj.times.resize(T);
    traj.latent.resize(T, 1);
    traj.obs.resize(T);

    double n = n0;
    for (int t = 1; t <= T; ++t) {
        double z = 0.0;
        if (sd > 0.0) z = std::normal_distribution<double>(0.0, sd)(rng);
        n = r * n * std::exp(-n + z);
        if (!std::isfinite(n)) throw SimulationFailure("ricker_simulate: non-finite state", t);
        const double lambda = params.phi * n;
        double y = 0.0;
        if (lambda > 0.0) {
            y = static_cast<double>(std::poisson_distribution<long>(lambda)(rng));
        }
        traj.times[t - 1] = t;
        traj.latent(t - 1, 0) = n;
        traj.obs[t - 1] = y;
    }
    return traj;
}

}  // namespace ssinfer
