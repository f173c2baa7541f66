#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ssinfer/mcmc.hpp"
#include "ssinfer/params.hpp"

namespace ssinfer {

/// Multivariate-normality diagnostics for simulated summary statistics:
/// per-row squared Mahalanobis distances against chi-squared quantiles,
/// plus marginal normal q-q data per statistic.
struct NormalityReport {
    Eigen::VectorXd chi2_sorted;        // ascending distances, length M
    Eigen::VectorXd chi2_theoretical;   // chi2(d) quantiles at (i - 0.5)/M
    double obs_mahalanobis = 0.0;       // distance of s_obs to the cloud
    Eigen::MatrixXd marginal_sorted;       // M x d, each column sorted
    Eigen::MatrixXd marginal_theoretical;  // matching normal quantiles
    bool jittered = false;

    /// No-intercept least-squares slope of observed on theoretical quantiles.
    double qq_slope() const;
};

NormalityReport krzanowski_report(const Eigen::MatrixXd& stats, const Eigen::VectorXd& s_obs);

/// Comparison of two posterior-mean estimators over replicate datasets.
struct EstimatorComparisonRow {
    std::string name;
    double rmse_a = 0.0;
    double rmse_b = 0.0;
    double var_bias_ratio_a = 0.0;
    double var_bias_ratio_b = 0.0;
    double mean_logsq_diff = 0.0;  // mean of log e_a^2 - log e_b^2
    double p_value = 1.0;          // paired two-sided t-test
};

std::vector<EstimatorComparisonRow> compare_estimators(const ParamVec& truth,
                                                       const std::vector<Chain>& chains_a,
                                                       const std::vector<Chain>& chains_b);

/// Post-burn-in mean and standard deviation per parameter.
struct PosteriorSummaryRow {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
};

std::vector<PosteriorSummaryRow> posterior_summary(const Chain& chain);

}  // namespace ssinfer
