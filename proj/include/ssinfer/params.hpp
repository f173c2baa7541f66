#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ssinfer {

/// Named, ordered real parameter vector. Names give stable column headers in
/// chain/population files; support and transform metadata live in PriorSpec
/// and ProposalSpec, which share this ordering.
struct ParamVec {
    std::vector<std::string> names;
    Eigen::VectorXd values;

    ParamVec() = default;
    ParamVec(std::vector<std::string> n, Eigen::VectorXd v);

    int size() const { return static_cast<int>(values.size()); }
    int index_of(const std::string& name) const;  // -1 when absent
    double get(const std::string& name) const;    // throws when absent
    void set(const std::string& name, double v);
};

}  // namespace ssinfer
