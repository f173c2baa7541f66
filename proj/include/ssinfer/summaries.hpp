#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ssinfer {

/// d-dimensional statistic vector with stable component names.
struct SummaryVector {
    std::vector<std::string> names;
    Eigen::VectorXd values;
    bool degenerate = false;  // a component regression was rank deficient

    int size() const { return static_cast<int>(values.size()); }
};

/// Symmetric positive semi-definite scaling matrix for the squared
/// Mahalanobis distance.
struct ScalingMatrix {
    Eigen::MatrixXd a;
    void validate() const;  // symmetry to 1e-10, eigenvalues >= -1e-10
    static ScalingMatrix identity(int d);
};

/// Biased (1/T) autocovariance at the given lag.
double autocovariance(const Eigen::VectorXd& x, int lag);

/// Number of sign changes in the sequence of nonzero consecutive
/// differences. Zero differences never count: plateaus are collapsed, so a
/// level stretch between an up and a down move contributes one turn.
int turning_points(const Eigen::VectorXd& x);

struct RegressionResult {
    Eigen::VectorXd coef;
    bool degenerate = false;  // rank-deficient design; coef is minimum-norm
};

/// No-intercept least squares of x_{t+1} on
/// (x_t, x_t^2, x_{t-6}, x_{t-6}^2, x_{t-6}^3) over all valid t.
RegressionResult poly_autoregression(const Eigen::VectorXd& x);

/// Differences x_t - x_{t-1} sorted ascending, regressed without intercept
/// on (u, u^2, u^3) where u_i = (i - 0.5)/m - 0.5 is the standardized rank
/// grid. All-equal differences return zero coefficients with the flag set.
RegressionResult ordered_diff_cubic(const Eigen::VectorXd& x);

/// 17 statistics: autocovariances lags 0-5, mean, mean - median,
/// polynomial autoregression beta_1..beta_5, ordered-difference cubic
/// coefficients, turning points.
SummaryVector vole_summaries(const Eigen::VectorXd& y);

/// 13 statistics: autocovariances lags 0-5, mean, number of zeros,
/// ordered-difference cubic coefficients, and the no-intercept regression
/// of y_{t+1}^0.3 on (y_t^0.3, y_t^0.6).
SummaryVector ricker_summaries(const Eigen::VectorXd& y);

double mahalanobis_sq(const Eigen::VectorXd& s_obs, const Eigen::VectorXd& s,
                      const ScalingMatrix& a);
double mahalanobis_sq(const SummaryVector& s_obs, const SummaryVector& s,
                      const ScalingMatrix& a);

}  // namespace ssinfer
