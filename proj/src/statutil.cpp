#include "ssinfer/statutil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace ssinfer {

double log_sum_exp(const Eigen::VectorXd& logs) {
    if (logs.size() == 0) throw std::invalid_argument("log_sum_exp: empty input");
    const double m = logs.maxCoeff();
    if (!std::isfinite(m)) return m;  // all -inf (or a nan propagates)
    double acc = 0.0;
    for (long i = 0; i < logs.size(); ++i) acc += std::exp(logs[i] - m);
    return m + std::log(acc);
}

double log_mean_exp(const Eigen::VectorXd& logs) {
    return log_sum_exp(logs) - std::log(static_cast<double>(logs.size()));
}

double poisson_logpmf(double count, double lambda) {
    if (count < 0) return -std::numeric_limits<double>::infinity();
    if (lambda <= 0.0) {
        return count == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return count * std::log(lambda) - lambda - std::lgamma(count + 1.0);
}

double sample_mean(const Eigen::VectorXd& x) {
    if (x.size() == 0) throw std::invalid_argument("sample_mean: empty input");
    return x.mean();
}

double sample_variance(const Eigen::VectorXd& x) {
    const long n = x.size();
    if (n < 2) throw std::invalid_argument("sample_variance: need at least 2 values");
    const double m = x.mean();
    return (x.array() - m).square().sum() / static_cast<double>(n - 1);
}

double sample_sd(const Eigen::VectorXd& x) { return std::sqrt(sample_variance(x)); }

double lower_median(Eigen::VectorXd x) {
    const long n = x.size();
    if (n == 0) throw std::invalid_argument("lower_median: empty input");
    std::sort(x.data(), x.data() + n);
    return x[(n - 1) / 2];
}

double weighted_mean(const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
    if (x.size() != w.size()) throw std::invalid_argument("weighted_mean: size mismatch");
    const double total = w.sum();
    if (total <= 0) throw std::invalid_argument("weighted_mean: weights sum to zero");
    return x.dot(w) / total;
}

double weighted_variance(const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
    const double m = weighted_mean(x, w);
    const double total = w.sum();
    return (w.array() * (x.array() - m).square()).sum() / total;
}

double batch_means_se(const Eigen::VectorXd& x) {
    const long n = x.size();
    if (n < 4) throw std::invalid_argument("batch_means_se: chain too short");
    const long n_batches = std::max<long>(2, static_cast<long>(std::floor(std::sqrt(double(n)))));
    const long batch = n / n_batches;
    Eigen::VectorXd means(n_batches);
    for (long b = 0; b < n_batches; ++b) {
        means[b] = x.segment(b * batch, batch).mean();
    }
    const double var_means = sample_variance(means);
    return std::sqrt(var_means / static_cast<double>(n_batches));
}

double pearson_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson_correlation: bad input sizes");
    const double mx = x.mean(), my = y.mean();
    const Eigen::ArrayXd dx = x.array() - mx, dy = y.array() - my;
    const double denom = std::sqrt(dx.square().sum() * dy.square().sum());
    if (denom == 0.0) throw std::invalid_argument("pearson_correlation: zero variance");
    return (dx * dy).sum() / denom;
}

Eigen::Vector3d quadratic_fit(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("quadratic_fit: need at least 3 points");
    Eigen::MatrixXd design(x.size(), 3);
    design.col(0).setOnes();
    design.col(1) = x;
    design.col(2) = x.array().square();
    return design.colPivHouseholderQr().solve(y);
}

double quadratic_argmin(const Eigen::Vector3d& coef, double lo, double hi) {
    auto value = [&](double v) { return coef[0] + coef[1] * v + coef[2] * v * v; };
    double best_x = lo;
    double best = value(lo);
    if (value(hi) < best) {
        best = value(hi);
        best_x = hi;
    }
    if (coef[2] > 0) {
        const double vertex = -coef[1] / (2.0 * coef[2]);
        if (vertex > lo && vertex < hi && value(vertex) < best) best_x = vertex;
    }
    return best_x;
}

double chi_squared_quantile(double df, double p) {
    boost::math::chi_squared dist(df);
    return boost::math::quantile(dist, p);
}

double normal_quantile(double p) {
    boost::math::normal dist(0.0, 1.0);
    return boost::math::quantile(dist, p);
}

double t_test_two_sided_pvalue(double t_stat, double df) {
    boost::math::students_t dist(df);
    const double tail = boost::math::cdf(boost::math::complement(dist, std::fabs(t_stat)));
    return 2.0 * tail;
}

}  // namespace ssinfer
