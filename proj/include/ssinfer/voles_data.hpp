#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace ssinfer {

enum class Season { Spring, Autumn };

/// Trapping-index series: voles per hundred trap-nights, preprocessed to
/// approximate Poisson counts by scaling with 10 and rounding half-up.
struct ObservedSeries {
    std::vector<int> years;
    std::vector<Season> seasons;
    Eigen::VectorXd raw_index;
    Eigen::VectorXd counts;

    long size() const { return raw_index.size(); }
    /// Spring = year + 0.45, autumn = year + 0.70.
    Eigen::VectorXd obs_times() const;
};

/// round-half-up(10 * index); the preprocessing rule for every data point.
double preprocess_index(double raw_index);

/// Parses a `year,season,index` CSV (header required, season in
/// {spring, autumn}); rows must be ordered by (year, season).
ObservedSeries load_voles_csv(std::istream& in);
ObservedSeries load_voles_csv(const std::string& path);

}  // namespace ssinfer
