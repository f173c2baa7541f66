#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ssinfer {

double log_sum_exp(const Eigen::VectorXd& logs);
double log_mean_exp(const Eigen::VectorXd& logs);

/// log Poisson pmf; lambda = 0 is allowed (point mass at zero).
double poisson_logpmf(double count, double lambda);

double sample_mean(const Eigen::VectorXd& x);
/// Unbiased (1/(n-1)) sample variance; n >= 2.
double sample_variance(const Eigen::VectorXd& x);
double sample_sd(const Eigen::VectorXd& x);

/// Lower median: for even length returns the smaller of the two middle
/// order statistics. Deterministic tie handling throughout the toolkit.
double lower_median(Eigen::VectorXd x);

/// Weighted mean / variance with normalized weights.
double weighted_mean(const Eigen::VectorXd& x, const Eigen::VectorXd& w);
double weighted_variance(const Eigen::VectorXd& x, const Eigen::VectorXd& w);

/// Monte Carlo standard error of the mean of a (possibly autocorrelated)
/// scalar chain, via non-overlapping batch means with ~sqrt(n) batches.
double batch_means_se(const Eigen::VectorXd& x);

double pearson_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Least-squares fit of y = c0 + c1 x + c2 x^2; returns (c0, c1, c2).
Eigen::Vector3d quadratic_fit(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
/// Argmin of the fitted quadratic over [lo, hi] (vertex or boundary).
double quadratic_argmin(const Eigen::Vector3d& coef, double lo, double hi);

double chi_squared_quantile(double df, double p);
double normal_quantile(double p);
/// Two-sided p-value of a paired t statistic with df degrees of freedom.
double t_test_two_sided_pvalue(double t_stat, double df);

}  // namespace ssinfer
