#include "ssinfer/params.hpp"

#include <stdexcept>

namespace ssinfer {

ParamVec::ParamVec(std::vector<std::string> n, Eigen::VectorXd v)
    : names(std::move(n)), values(std::move(v)) {
    if (names.size() != static_cast<size_t>(values.size()))
        throw std::invalid_argument("ParamVec: names/values length mismatch");
}

int ParamVec::index_of(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

double ParamVec::get(const std::string& name) const {
    const int i = index_of(name);
    if (i < 0) throw std::invalid_argument("ParamVec: unknown parameter '" + name + "'");
    return values[i];
}

void ParamVec::set(const std::string& name, double v) {
    const int i = index_of(name);
    if (i < 0) throw std::invalid_argument("ParamVec: unknown parameter '" + name + "'");
    values[i] = v;
}

}  // namespace ssinfer
