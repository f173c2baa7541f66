#include "ssinfer/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssinfer/errors.hpp"
#include "ssinfer/statutil.hpp"
#include "ssinfer/synlik.hpp"

namespace ssinfer {

double NormalityReport::qq_slope() const {
    const double denom = chi2_theoretical.squaredNorm();
    if (denom == 0.0) throw std::logic_error("qq_slope: degenerate theoretical quantiles");
    return chi2_sorted.dot(chi2_theoretical) / denom;
}

NormalityReport krzanowski_report(const Eigen::MatrixXd& stats, const Eigen::VectorXd& s_obs) {
    const long m = stats.rows();
    const long d = stats.cols();
    if (s_obs.size() != d) throw std::invalid_argument("krzanowski_report: dimension mismatch");
    if (m < d + 2) throw std::invalid_argument("krzanowski_report: need M >= d+2 rows");

    auto [mu, sigma] = sample_mean_cov(stats);

    NormalityReport report;
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        // Same jitter ladder as the synthetic likelihood, flagged.
        const double scale = sigma.trace() > 0.0 ? sigma.trace() / d : 1.0;
        for (const double delta : kJitterDeltas) {
            if (delta == 0.0) continue;
            Eigen::MatrixXd candidate = sigma;
            candidate.diagonal().array() += delta * scale;
            llt.compute(candidate);
            if (llt.info() == Eigen::Success) {
                report.jittered = true;
                break;
            }
        }
        if (llt.info() != Eigen::Success)
            throw SingularCovariance("krzanowski_report: covariance singular after jitter");
    }

    report.chi2_sorted.resize(m);
    for (long i = 0; i < m; ++i) {
        const Eigen::VectorXd diff = stats.row(i).transpose() - mu;
        report.chi2_sorted[i] = llt.matrixL().solve(diff).squaredNorm();
    }
    std::sort(report.chi2_sorted.data(), report.chi2_sorted.data() + m);

    report.chi2_theoretical.resize(m);
    for (long i = 0; i < m; ++i)
        report.chi2_theoretical[i] =
            chi_squared_quantile(static_cast<double>(d), (i + 0.5) / static_cast<double>(m));

    const Eigen::VectorXd obs_diff = s_obs - mu;
    report.obs_mahalanobis = llt.matrixL().solve(obs_diff).squaredNorm();

    report.marginal_sorted.resize(m, d);
    report.marginal_theoretical.resize(m, d);
    for (long j = 0; j < d; ++j) {
        Eigen::VectorXd col = stats.col(j);
        std::sort(col.data(), col.data() + m);
        report.marginal_sorted.col(j) = col;
        const double sd = std::sqrt(sigma(j, j));
        for (long i = 0; i < m; ++i)
            report.marginal_theoretical(i, j) =
                mu[j] + sd * normal_quantile((i + 0.5) / static_cast<double>(m));
    }
    return report;
}

namespace {

Eigen::VectorXd posterior_means_for(const Chain& chain, const std::vector<std::string>& names) {
    Eigen::MatrixXd post = chain.post_burnin();
    Eigen::VectorXd means(names.size());
    for (size_t j = 0; j < names.size(); ++j) {
        int idx = -1;
        for (size_t i = 0; i < chain.names.size(); ++i)
            if (chain.names[i] == names[j]) idx = static_cast<int>(i);
        if (idx < 0)
            throw std::invalid_argument("compare_estimators: parameter '" + names[j] +
                                        "' missing from a chain");
        means[static_cast<long>(j)] = post.col(idx).mean();
    }
    return means;
}

}  // namespace

std::vector<EstimatorComparisonRow> compare_estimators(const ParamVec& truth,
                                                       const std::vector<Chain>& chains_a,
                                                       const std::vector<Chain>& chains_b) {
    if (chains_a.size() != chains_b.size() || chains_a.size() < 2)
        throw std::invalid_argument("compare_estimators: need equal list lengths >= 2");
    const long n = static_cast<long>(chains_a.size());
    const int k = truth.size();

    Eigen::MatrixXd err_a(n, k), err_b(n, k);
    for (long i = 0; i < n; ++i) {
        err_a.row(i) =
            (posterior_means_for(chains_a[i], truth.names) - truth.values).transpose();
        err_b.row(i) =
            (posterior_means_for(chains_b[i], truth.names) - truth.values).transpose();
    }

    std::vector<EstimatorComparisonRow> rows;
    for (int j = 0; j < k; ++j) {
        EstimatorComparisonRow row;
        row.name = truth.names[j];
        const Eigen::VectorXd ea = err_a.col(j), eb = err_b.col(j);
        row.rmse_a = std::sqrt(ea.squaredNorm() / n);
        row.rmse_b = std::sqrt(eb.squaredNorm() / n);
        const double bias_a = ea.mean(), bias_b = eb.mean();
        const double var_a = n > 1 ? sample_variance(ea) : 0.0;
        const double var_b = n > 1 ? sample_variance(eb) : 0.0;
        row.var_bias_ratio_a = bias_a == 0.0 ? 0.0 : var_a / (bias_a * bias_a);
        row.var_bias_ratio_b = bias_b == 0.0 ? 0.0 : var_b / (bias_b * bias_b);

        Eigen::VectorXd diff(n);
        for (long i = 0; i < n; ++i)
            diff[i] = std::log(ea[i] * ea[i]) - std::log(eb[i] * eb[i]);
        row.mean_logsq_diff = diff.mean();
        const double sd = sample_sd(diff);
        if (sd == 0.0 || !std::isfinite(sd)) {
            row.p_value = 1.0;  // identical (or degenerate) errors: no evidence
        } else {
            const double t_stat = diff.mean() / (sd / std::sqrt(static_cast<double>(n)));
            row.p_value = t_test_two_sided_pvalue(t_stat, static_cast<double>(n - 1));
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<PosteriorSummaryRow> posterior_summary(const Chain& chain) {
    const Eigen::MatrixXd post = chain.post_burnin();
    if (post.rows() < 2)
        throw std::invalid_argument("posterior_summary: need at least 2 post-burn-in rows");
    std::vector<PosteriorSummaryRow> rows;
    for (long j = 0; j < post.cols(); ++j) {
        PosteriorSummaryRow row;
        row.name = j < static_cast<long>(chain.names.size()) ? chain.names[j]
                                                             : "p" + std::to_string(j);
        row.mean = post.col(j).mean();
        row.sd = sample_sd(post.col(j));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ssinfer
