#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ssinfer {

/// N i.i.d. draws from Exponential(rate alpha).
Eigen::VectorXd exponential_simulate(double alpha, int n, std::uint64_t seed);

}  // namespace ssinfer
