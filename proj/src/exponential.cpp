#include "ssinfer/exponential.hpp"

#include <random>
#include <stdexcept>

#include "ssinfer/rng.hpp"

namespace ssinfer {

Eigen::VectorXd exponential_simulate(double alpha, int n, std::uint64_t seed) {
    if (!(alpha > 0.0)) throw std::invalid_argument("exponential_simulate: alpha must be > 0");
    if (n < 1) throw std::invalid_argument("exponential_simulate: n must be >= 1");
    RngEngine rng = make_rng(seed);
    std::exponential_distribution<double> dist(alpha);
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out[i] = dist(rng);
    return out;
}

}  // namespace ssinfer
