#pragma once

#include <cstdint>

#include "ssinfer/rng.hpp"
#include "ssinfer/trajectory.hpp"

namespace ssinfer {

/// Stochastic Ricker map: N_t = r N_{t-1} exp(-N_{t-1} + Z_t) with
/// Z_t ~ N(0, sigma2) and observations Y_t ~ Poisson(phi N_t).
struct RickerParams {
    double log_r;
    double sigma2;
    double phi;
    void validate() const;
};

Trajectory ricker_simulate(const RickerParams& params, int T, double n0, std::uint64_t seed);

/// Same model driven by an existing engine (seed field left zero).
Trajectory ricker_simulate(const RickerParams& params, int T, double n0, RngEngine& rng);

inline Trajectory ricker_simulate(const RickerParams& params, int T, std::uint64_t seed) {
    return ricker_simulate(params, T, 1.0, seed);
}

}  // namespace ssinfer
