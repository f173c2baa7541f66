#include "ssinfer/priors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ssinfer {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}  // namespace

PriorComponent PriorComponent::normal(double mu, double sigma, double lo, double hi) {
    if (!(sigma > 0.0)) throw std::invalid_argument("normal prior: sigma must be > 0");
    if (!(lo < hi)) throw std::invalid_argument("normal prior: empty support");
    PriorComponent c;
    c.kind = Kind::Normal;
    c.p1 = mu;
    c.p2 = sigma;
    c.lower = lo;
    c.upper = hi;
    return c;
}

PriorComponent PriorComponent::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential prior: rate must be > 0");
    PriorComponent c;
    c.kind = Kind::Exponential;
    c.p1 = rate;
    c.lower = 0.0;
    c.upper = kInf;
    return c;
}

PriorComponent PriorComponent::gamma(double shape, double scale) {
    if (!(shape > 0.0 && scale > 0.0))
        throw std::invalid_argument("gamma prior: shape and scale must be > 0");
    PriorComponent c;
    c.kind = Kind::Gamma;
    c.p1 = shape;
    c.p2 = scale;
    c.lower = 0.0;
    c.upper = kInf;
    return c;
}

PriorComponent PriorComponent::uniform_half_line(double lo) {
    PriorComponent c;
    c.kind = Kind::UniformHalfLine;
    c.p1 = lo;
    c.lower = lo;
    c.upper = kInf;
    return c;
}

bool PriorComponent::in_support(double x) const {
    if (!std::isfinite(x)) return false;
    if (kind == Kind::Exponential || kind == Kind::Gamma) {
        if (!(x > 0.0)) return false;
    }
    return x >= lower && x <= upper;
}

double PriorComponent::log_density(double x) const {
    if (!in_support(x)) return -kInf;
    switch (kind) {
        case Kind::Normal: {
            const double z = (x - p1) / p2;
            return -0.5 * (kLog2Pi + z * z) - std::log(p2);
        }
        case Kind::Exponential:
            return std::log(p1) - p1 * x;
        case Kind::Gamma:
            return (p1 - 1.0) * std::log(x) - x / p2 - p1 * std::log(p2) - std::lgamma(p1);
        case Kind::UniformHalfLine:
            return 0.0;  // improper: constant on the support
    }
    return -kInf;
}

double PriorComponent::sample(RngEngine& rng) const {
    if (!proper())
        throw std::logic_error("PriorComponent::sample: improper prior cannot be sampled");
    for (int attempt = 0; attempt < 100000; ++attempt) {
        double x = 0.0;
        switch (kind) {
            case Kind::Normal:
                x = std::normal_distribution<double>(p1, p2)(rng);
                break;
            case Kind::Exponential:
                x = std::exponential_distribution<double>(p1)(rng);
                break;
            case Kind::Gamma:
                x = std::gamma_distribution<double>(p1, p2)(rng);
                break;
            case Kind::UniformHalfLine:
                break;
        }
        if (in_support(x)) return x;
    }
    throw std::runtime_error("PriorComponent::sample: rejection sampling failed");
}

double PriorComponent::mean() const {
    switch (kind) {
        case Kind::Normal:
            return p1;
        case Kind::Exponential:
            return 1.0 / p1;
        case Kind::Gamma:
            return p1 * p2;
        case Kind::UniformHalfLine:
            break;
    }
    throw std::logic_error("PriorComponent::mean: improper prior has no mean");
}

void PriorSpec::validate() const {
    if (names.size() != components.size())
        throw std::invalid_argument("PriorSpec: names/components mismatch");
    if (components.empty()) throw std::invalid_argument("PriorSpec: empty");
}

bool PriorSpec::in_support(const Eigen::VectorXd& theta) const {
    if (theta.size() != size()) return false;
    for (int i = 0; i < size(); ++i)
        if (!components[i].in_support(theta[i])) return false;
    return true;
}

double PriorSpec::log_density(const Eigen::VectorXd& theta) const {
    if (theta.size() != size())
        throw std::invalid_argument("PriorSpec::log_density: dimension mismatch");
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) {
        acc += components[i].log_density(theta[i]);
        if (acc == -kInf) return -kInf;
    }
    return acc;
}

Eigen::VectorXd PriorSpec::sample(RngEngine& rng) const {
    Eigen::VectorXd theta(size());
    for (int i = 0; i < size(); ++i) theta[i] = components[i].sample(rng);
    return theta;
}

bool PriorSpec::proper() const {
    for (const auto& c : components)
        if (!c.proper()) return false;
    return true;
}

ParamVec PriorSpec::default_init() const {
    Eigen::VectorXd v(size());
    for (int i = 0; i < size(); ++i)
        v[i] = components[i].proper() ? components[i].mean() : 1.0;
    return ParamVec(names, v);
}

PriorSpec vole_default_prior() {
    PriorSpec spec;
    spec.names = {"r", "e", "g", "h", "a", "d", "s", "sigma", "phi"};
    spec.components = {
        PriorComponent::normal(5.0, 1.0, 0.0),
        PriorComponent::normal(1.0, 1.0),
        PriorComponent::exponential(7.0),
        PriorComponent::gamma(4.0, 1.0 / 40.0),
        PriorComponent::normal(15.0, 15.0, 0.0),
        PriorComponent::normal(0.04, 0.04, 0.0),
        PriorComponent::normal(1.25, 0.5, 0.0),
        PriorComponent::uniform_half_line(0.5),
        PriorComponent::uniform_half_line(0.0),
    };
    return spec;
}

}  // namespace ssinfer
