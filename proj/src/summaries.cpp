#include "ssinfer/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssinfer/statutil.hpp"

namespace ssinfer {

void ScalingMatrix::validate() const {
    if (a.rows() != a.cols()) throw std::invalid_argument("ScalingMatrix: must be square");
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("ScalingMatrix: not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("ScalingMatrix: not positive semi-definite");
}

ScalingMatrix ScalingMatrix::identity(int d) {
    ScalingMatrix m;
    m.a = Eigen::MatrixXd::Identity(d, d);
    return m;
}

double autocovariance(const Eigen::VectorXd& x, int lag) {
    const long T = x.size();
    if (lag < 0) throw std::invalid_argument("autocovariance: lag must be >= 0");
    if (lag >= T) throw std::invalid_argument("autocovariance: lag must be < length");
    const double mean = x.mean();
    double acc = 0.0;
    for (long t = lag; t < T; ++t) acc += (x[t] - mean) * (x[t - lag] - mean);
    return acc / static_cast<double>(T);
}

int turning_points(const Eigen::VectorXd& x) {
    const long T = x.size();
    if (T < 3) throw std::invalid_argument("turning_points: need at least 3 values");
    int count = 0;
    double prev_diff = 0.0;
    bool have_prev = false;
    for (long t = 1; t < T; ++t) {
        const double diff = x[t] - x[t - 1];
        if (diff == 0.0) continue;
        if (have_prev && prev_diff * diff < 0.0) ++count;
        prev_diff = diff;
        have_prev = true;
    }
    return count;
}

namespace {

/// Minimum-norm least squares with rank detection.
RegressionResult solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    RegressionResult out;
    out.coef = cod.solve(y);
    out.degenerate = cod.rank() < design.cols();
    return out;
}

}  // namespace

RegressionResult poly_autoregression(const Eigen::VectorXd& x) {
    const long T = x.size();
    if (T < 13) throw std::invalid_argument("poly_autoregression: need length >= 13");
    // Rows t = 7..T-1 (1-based): response x_{t+1}, regressors from x_t, x_{t-6}.
    const long rows = T - 7;
    Eigen::MatrixXd design(rows, 5);
    Eigen::VectorXd response(rows);
    for (long i = 0; i < rows; ++i) {
        const double xt = x[i + 6];
        const double xlag = x[i];
        design(i, 0) = xt;
        design(i, 1) = xt * xt;
        design(i, 2) = xlag;
        design(i, 3) = xlag * xlag;
        design(i, 4) = xlag * xlag * xlag;
        response[i] = x[i + 7];
    }
    return solve_least_squares(design, response);
}

RegressionResult ordered_diff_cubic(const Eigen::VectorXd& x) {
    const long T = x.size();
    if (T < 5) throw std::invalid_argument("ordered_diff_cubic: need length >= 5");
    const long m = T - 1;
    Eigen::VectorXd diffs(m);
    for (long t = 0; t < m; ++t) diffs[t] = x[t + 1] - x[t];
    std::sort(diffs.data(), diffs.data() + m);

    RegressionResult out;
    if (diffs[0] == diffs[m - 1]) {  // no spread in the marginal differences
        out.coef = Eigen::VectorXd::Zero(3);
        out.degenerate = true;
        return out;
    }
    Eigen::MatrixXd design(m, 3);
    for (long i = 0; i < m; ++i) {
        const double u = (i + 0.5) / static_cast<double>(m) - 0.5;
        design(i, 0) = u;
        design(i, 1) = u * u;
        design(i, 2) = u * u * u;
    }
    return solve_least_squares(design, diffs);
}

SummaryVector vole_summaries(const Eigen::VectorXd& y) {
    if (y.size() < 13) throw std::invalid_argument("vole_summaries: need length >= 13");
    SummaryVector s;
    s.values.resize(17);
    s.names = {"acv0",  "acv1",  "acv2",  "acv3",  "acv4",  "acv5",
               "mean",  "mean_minus_median", "beta1", "beta2", "beta3",
               "beta4", "beta5", "diff_cubic1", "diff_cubic2", "diff_cubic3",
               "turning_points"};
    for (int lag = 0; lag <= 5; ++lag) s.values[lag] = autocovariance(y, lag);
    s.values[6] = y.mean();
    s.values[7] = y.mean() - lower_median(y);
    const RegressionResult ar = poly_autoregression(y);
    s.values.segment(8, 5) = ar.coef;
    const RegressionResult cubic = ordered_diff_cubic(y);
    s.values.segment(13, 3) = cubic.coef;
    s.values[16] = turning_points(y);
    s.degenerate = ar.degenerate || cubic.degenerate;
    return s;
}

SummaryVector ricker_summaries(const Eigen::VectorXd& y) {
    const long T = y.size();
    if (T < 10) throw std::invalid_argument("ricker_summaries: need length >= 10");
    SummaryVector s;
    s.values.resize(13);
    s.names = {"acv0", "acv1", "acv2", "acv3", "acv4", "acv5", "mean",
               "n_zeros", "diff_cubic1", "diff_cubic2", "diff_cubic3",
               "pow_reg1", "pow_reg2"};
    for (int lag = 0; lag <= 5; ++lag) s.values[lag] = autocovariance(y, lag);
    s.values[6] = y.mean();
    s.values[7] = static_cast<double>((y.array() == 0.0).count());
    const RegressionResult cubic = ordered_diff_cubic(y);
    s.values.segment(8, 3) = cubic.coef;

    Eigen::MatrixXd design(T - 1, 2);
    Eigen::VectorXd response(T - 1);
    for (long t = 0; t < T - 1; ++t) {
        const double p = std::pow(y[t], 0.3);
        design(t, 0) = p;
        design(t, 1) = p * p;
        response[t] = std::pow(y[t + 1], 0.3);
    }
    const RegressionResult pow_reg = solve_least_squares(design, response);
    s.values.segment(11, 2) = pow_reg.coef;
    s.degenerate = cubic.degenerate || pow_reg.degenerate;
    return s;
}

double mahalanobis_sq(const Eigen::VectorXd& s_obs, const Eigen::VectorXd& s,
                      const ScalingMatrix& a) {
    if (s_obs.size() != s.size() || a.a.rows() != s.size() || a.a.cols() != s.size())
        throw std::invalid_argument("mahalanobis_sq: dimension mismatch");
    const Eigen::VectorXd diff = s_obs - s;
    return diff.dot(a.a * diff);
}

double mahalanobis_sq(const SummaryVector& s_obs, const SummaryVector& s,
                      const ScalingMatrix& a) {
    return mahalanobis_sq(s_obs.values, s.values, a);
}

}  // namespace ssinfer
