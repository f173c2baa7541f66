#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "ssinfer/params.hpp"
#include "ssinfer/rng.hpp"

namespace ssinfer {

/// One marginal prior. Normal priors may carry explicit support bounds
/// (truncation); the improper half-line prior has log-density 0 on its
/// support and cannot be sampled.
struct PriorComponent {
    enum class Kind { Normal, Exponential, Gamma, UniformHalfLine };

    Kind kind = Kind::Normal;
    double p1 = 0.0;  // Normal mu / Exponential rate / Gamma shape / half-line lower
    double p2 = 1.0;  // Normal sigma / Gamma scale (unused otherwise)
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    static PriorComponent normal(double mu, double sigma,
                                 double lo = -std::numeric_limits<double>::infinity(),
                                 double hi = std::numeric_limits<double>::infinity());
    static PriorComponent exponential(double rate);
    static PriorComponent gamma(double shape, double scale);
    static PriorComponent uniform_half_line(double lo);

    bool proper() const { return kind != Kind::UniformHalfLine; }
    bool in_support(double x) const;
    /// Log-density up to the truncation constant; -inf off support.
    double log_density(double x) const;
    /// Rejection sampling into the support; throws for improper priors.
    double sample(RngEngine& rng) const;
    /// Mean of the untruncated distribution; used for chain initialization.
    double mean() const;
};

struct PriorSpec {
    std::vector<std::string> names;
    std::vector<PriorComponent> components;

    int size() const { return static_cast<int>(components.size()); }
    void validate() const;
    bool in_support(const Eigen::VectorXd& theta) const;
    double log_density(const Eigen::VectorXd& theta) const;  // -inf off support
    Eigen::VectorXd sample(RngEngine& rng) const;
    bool proper() const;
    /// Prior means where proper, 1.0 otherwise (the toolkit's default
    /// chain initialization).
    ParamVec default_init() const;
};

/// The nine-parameter prior of the vole-weasel analysis. Positivity of
/// (r, a, d, s) is enforced through support bounds; sigma and phi carry
/// improper half-line priors.
PriorSpec vole_default_prior();

}  // namespace ssinfer
