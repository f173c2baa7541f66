#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace ssinfer {

/// Latent state path plus observation series on a time grid.
/// latent has one row per time point; obs has one entry per time point
/// (integral counts for the ecological models, reals for the linear-Gaussian
/// oracle).
struct Trajectory {
    Eigen::VectorXd times;
    Eigen::MatrixXd latent;
    Eigen::VectorXd obs;
    std::uint64_t seed = 0;
    int clamp_events = 0;  // times the positivity floor was applied

    std::vector<std::string> state_names;

    long size() const { return times.size(); }
    void validate() const;  // strictly increasing times, matching lengths
    void write_csv(std::ostream& out) const;  // columns: time, <states...>, obs
};

}  // namespace ssinfer
