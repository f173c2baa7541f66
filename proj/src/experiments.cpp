#include "ssinfer/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "ssinfer/abc.hpp"
#include "ssinfer/csv.hpp"
#include "ssinfer/diagnostics.hpp"
#include "ssinfer/exponential.hpp"
#include "ssinfer/lgssm.hpp"
#include "ssinfer/lyapunov.hpp"
#include "ssinfer/parallel.hpp"
#include "ssinfer/pfilter.hpp"
#include "ssinfer/ricker.hpp"
#include "ssinfer/statutil.hpp"
#include "ssinfer/summaries.hpp"
#include "ssinfer/synlik.hpp"
#include "ssinfer/vole.hpp"
#include "ssinfer/voles_data.hpp"

namespace ssinfer {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Ctx {
    const ExperimentConfig& cfg;
    fs::path dir;
    json& manifest;

    std::string file(const std::string& name) const { return (dir / name).string(); }
    void add_output(const std::string& name) { manifest["outputs"].push_back(name); }
};

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

void write_trajectory(Ctx& ctx, const std::string& name, const Trajectory& traj) {
    std::ofstream out(ctx.file(name), std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + ctx.file(name));
    traj.write_csv(out);
    ctx.add_output(name);
}

void write_chain(Ctx& ctx, const std::string& name, const Chain& chain) {
    std::ofstream out(ctx.file(name), std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + ctx.file(name));
    chain.write_csv(out);
    ctx.add_output(name);
}

json summary_rows_json(const std::vector<PosteriorSummaryRow>& rows) {
    json j = json::array();
    for (const auto& r : rows) j.push_back({{"name", r.name}, {"mean", r.mean}, {"sd", r.sd}});
    return j;
}

/// Shared vole experiment configuration: grid, budgets, prior, proposal.
struct VoleRunSetup {
    Eigen::VectorXd times;
    double dt = 0.01;
    double warmup = 10.0;
    int m = 500;
    int n_iter = 3000;
    int burn_in = 1000;
    int pmmh_replicates = 1;
    bool slmh_refresh = true;
    PriorSpec prior;
    ProposalSpec proposal;
    ParamVec init;
};

VoleRunSetup vole_setup(const ExperimentConfig& cfg) {
    VoleRunSetup setup;
    setup.dt = cfg.number("dt", 0.01);
    setup.warmup = cfg.number("warmup", 10.0);
    setup.m = static_cast<int>(cfg.budget("m", 500));
    setup.n_iter = static_cast<int>(cfg.budget("n_iter", 3000));
    setup.burn_in = static_cast<int>(cfg.budget("burn_in", 1000));
    setup.pmmh_replicates = static_cast<int>(cfg.budget("pmmh_replicates", 1));
    setup.slmh_refresh = cfg.flag("slmh_refresh", true);
    setup.prior = vole_default_prior();
    setup.proposal = ProposalSpec::for_prior(setup.prior, cfg.number("proposal_step", 0.1));
    setup.init = setup.prior.default_init();
    if (cfg.has("init")) {
        for (const auto& [key, value] : cfg.raw.at("init").items())
            setup.init.set(key, value.get<double>());
    }
    return setup;
}

/// Simulates one vole dataset at theta and summarizes it; the initial state
/// is drawn from the filtering prior Uniform(0.01, 1)^2.
SummarySimulator make_vole_summary_simulator(const VoleRunSetup& setup) {
    const Eigen::VectorXd times = setup.times;
    const double dt = setup.dt, warmup = setup.warmup;
    return [times, dt, warmup](const Eigen::VectorXd& theta, RngEngine& rng) {
        const VoleParams p = vole_params_from_vector(theta);
        std::uniform_real_distribution<double> unif(0.01, 1.0);
        const double n0 = unif(rng);
        const double p0 = unif(rng);
        const Trajectory traj = vole_simulate(p, times, dt, warmup, {n0, p0}, rng);
        return vole_summaries(traj.obs).values;
    };
}

// ---------------------------------------------------------------------------
// exp-sl-demo: synthetic likelihood vs the analytic exponential likelihood.
// ---------------------------------------------------------------------------

void run_exp_sl_demo(Ctx& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const double alpha_true = cfg.number("true_alpha", 1.0);
    const double lo = cfg.number("grid_lo", 0.5);
    const double hi = cfg.number("grid_hi", 2.0);
    const double step = cfg.number("grid_step", 0.05);
    const int m = static_cast<int>(cfg.budget("m", 10000));
    const int n_small = static_cast<int>(cfg.budget("n_small", 10));
    const int n_large = static_cast<int>(cfg.budget("n_large", 200));

    const long n_grid = std::llround((hi - lo) / step) + 1;
    json summary;

    for (const auto& [sample_size, label] :
         std::vector<std::pair<int, std::string>>{{n_small, "n_small"}, {n_large, "n_large"}}) {
        const Eigen::VectorXd x = exponential_simulate(
            alpha_true, sample_size, derive_seed(cfg.seed, 1, sample_size));
        const double sum_x = x.sum();
        Eigen::VectorXd s_obs(1);
        s_obs[0] = 1.0 / x.mean();

        Eigen::MatrixXd rows(n_grid, 3);
        for (long i = 0; i < n_grid; ++i) {
            const double alpha = lo + i * step;
            StatSimulator sim = [alpha, sample_size](RngEngine& rng) {
                std::exponential_distribution<double> dist(alpha);
                double acc = 0.0;
                for (int j = 0; j < sample_size; ++j) acc += dist(rng);
                Eigen::VectorXd s(1);
                s[0] = sample_size / acc;
                return s;
            };
            const SynlikFit fit = sl_estimate(
                sim, s_obs, m, derive_seed(cfg.seed, 2 + sample_size, static_cast<std::uint64_t>(i)));
            rows(i, 0) = alpha;
            rows(i, 1) = fit.log_sl;
            rows(i, 2) = sample_size * std::log(alpha) - alpha * sum_x;
        }
        const std::string fname = "sl_curve_" + std::to_string(sample_size) + ".csv";
        write_csv_file(ctx.file(fname), {"alpha", "log_sl", "analytic_loglik"}, rows);
        ctx.add_output(fname);

        long argmax_sl = 0, argmax_analytic = 0;
        rows.col(1).maxCoeff(&argmax_sl);
        rows.col(2).maxCoeff(&argmax_analytic);
        summary[label] = {
            {"sample_size", sample_size},
            {"s_obs", s_obs[0]},
            {"sl_maximizer", rows(argmax_sl, 0)},
            {"analytic_maximizer", rows(argmax_analytic, 0)},
            {"maximizers_differ", argmax_sl != argmax_analytic},
            {"curve_correlation", pearson_correlation(rows.col(1), rows.col(2))},
        };
    }
    write_json_file(ctx.file("summary.json"), summary);
    ctx.add_output("summary.json");
}

// ---------------------------------------------------------------------------
// lgssm-oracle: SIR likelihood estimates against the Kalman filter.
// ---------------------------------------------------------------------------

void run_lgssm_oracle(Ctx& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    LgSsmParams params;
    params.a_coef = cfg.number("a", 0.9);
    params.c_coef = cfg.number("c", 1.0);
    params.q_var = cfg.number("q", 0.5);
    params.r_var = cfg.number("r", 0.8);
    params.m0 = cfg.number("m0", 0.0);
    params.p0 = cfg.number("p0", 1.0);
    const int T = static_cast<int>(cfg.budget("T", 50));
    const int n_seeds = static_cast<int>(cfg.budget("n_seeds", 100));
    const int particles = static_cast<int>(cfg.budget("particles", 2000));

    const Trajectory traj = lg_ssm_simulate(params, T, derive_seed(cfg.seed, 1));
    write_trajectory(ctx, "data.csv", traj);
    const double kalman = kalman_loglik(params, traj.obs);

    const LgSsm model(params, traj.obs);
    Eigen::VectorXd estimates(n_seeds);
    parallel_for(n_seeds, cfg.threads, [&](long i) {
        estimates[i] =
            sir_loglik(model, particles, derive_seed(cfg.seed, 2, static_cast<std::uint64_t>(i)))
                .value;
    });

    Eigen::MatrixXd rows(n_seeds, 2);
    for (int i = 0; i < n_seeds; ++i) {
        rows(i, 0) = i;
        rows(i, 1) = estimates[i];
    }
    write_csv_file(ctx.file("estimates.csv"), {"replicate", "sir_loglik"}, rows);
    ctx.add_output("estimates.csv");

    const double mean = estimates.mean();
    const double se = sample_sd(estimates) / std::sqrt(static_cast<double>(n_seeds));
    json report = {
        {"kalman_loglik", kalman},     {"sir_mean", mean},
        {"sir_se", se},                {"z_score", (mean - kalman) / se},
        {"within_3se", std::fabs(mean - kalman) <= 3.0 * se},
        {"particles", particles},      {"n_seeds", n_seeds},
    };
    write_json_file(ctx.file("report.json"), report);
    ctx.add_output("report.json");
}

// ---------------------------------------------------------------------------
// ricker-scaling: tolerance reached by SMC-ABC vs scaling-matrix location.
// ---------------------------------------------------------------------------

void run_ricker_scaling(Ctx& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const double lo = cfg.number("grid_lo", 2.8);
    const double hi = cfg.number("grid_hi", 3.8);
    const int n_grid = static_cast<int>(cfg.budget("grid_points", 10));
    const int reps = static_cast<int>(cfg.budget("reps", 2));

    ScalingExperimentConfig sc;
    sc.T = static_cast<int>(cfg.budget("T", 50));
    sc.n_cov_sims = cfg.budget("n_cov_sims", 10000);
    sc.n_pop = static_cast<int>(cfg.budget("n_pop", 200));
    sc.stop_accept_ratio = cfg.number("stop_accept_ratio", 0.01);
    sc.smc.threads = cfg.threads;

    Eigen::VectorXd grid(n_grid);
    for (int i = 0; i < n_grid; ++i)
        grid[i] = n_grid == 1 ? lo : lo + i * (hi - lo) / (n_grid - 1);

    const auto rows = scaling_matrix_experiment(grid, reps, sc, derive_seed(cfg.seed, 1));

    Eigen::MatrixXd table(static_cast<long>(rows.size()), 5);
    for (size_t i = 0; i < rows.size(); ++i) {
        table(static_cast<long>(i), 0) = rows[i].v;
        table(static_cast<long>(i), 1) = rows[i].rep;
        table(static_cast<long>(i), 2) = rows[i].final_tolerance;
        table(static_cast<long>(i), 3) = rows[i].rounds;
        table(static_cast<long>(i), 4) = static_cast<double>(rows[i].total_sims);
    }
    write_csv_file(ctx.file("scaling.csv"),
                   {"v", "rep", "final_tolerance", "rounds", "total_sims"}, table);
    ctx.add_output("scaling.csv");

    const Eigen::Vector3d coef = quadratic_fit(table.col(0), table.col(2));
    const double argmin = quadratic_argmin(coef, lo, hi);
    double mean_lo = 0.0, mean_hi = 0.0;
    int c_lo = 0, c_hi = 0;
    for (const auto& r : rows) {
        if (r.v == grid[0]) {
            mean_lo += r.final_tolerance;
            ++c_lo;
        }
        if (r.v == grid[n_grid - 1]) {
            mean_hi += r.final_tolerance;
            ++c_hi;
        }
    }
    mean_lo /= std::max(1, c_lo);
    mean_hi /= std::max(1, c_hi);
    json summary = {
        {"quadratic_coefficients", {coef[0], coef[1], coef[2]}},
        {"quadratic_argmin", argmin},
        {"mean_tolerance_at_grid_lo", mean_lo},
        {"mean_tolerance_at_grid_hi", mean_hi},
    };
    write_json_file(ctx.file("summary.json"), summary);
    ctx.add_output("summary.json");
}

// ---------------------------------------------------------------------------
// vole-sim-compare: SLMH vs PMMH over simulated datasets.
// ---------------------------------------------------------------------------

void run_vole_sim_compare(Ctx& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    VoleRunSetup setup = vole_setup(cfg);
    const int first_year = static_cast<int>(cfg.integer("first_year", 1));
    const int n_years = static_cast<int>(cfg.budget("n_years", 45));
    setup.times = semiannual_obs_times(first_year, n_years);
    const int n_datasets = static_cast<int>(cfg.budget("n_datasets", 3));

    VoleParams truth = vole_study_truth();
    if (cfg.has("truth")) {
        ParamVec tv(vole_default_prior().names, vole_params_to_vector(truth));
        for (const auto& [key, value] : cfg.raw.at("truth").items())
            tv.set(key, value.get<double>());
        truth = vole_params_from_vector(tv.values);
    }

    std::vector<Trajectory> datasets(n_datasets);
    for (int ds = 0; ds < n_datasets; ++ds) {
        const std::uint64_t ds_seed = derive_seed(cfg.seed, 10, ds);
        RngEngine init_rng = make_rng(ds_seed, 0);
        std::uniform_real_distribution<double> unif(0.01, 1.0);
        const double n0 = unif(init_rng);
        const double p0 = unif(init_rng);
        datasets[ds] = vole_simulate(truth, setup.times, setup.dt, setup.warmup, {n0, p0},
                                     derive_seed(ds_seed, 1));
        write_trajectory(ctx, "dataset_" + std::to_string(ds) + ".csv", datasets[ds]);
    }

    const SummarySimulator sim = make_vole_summary_simulator(setup);
    std::vector<Chain> slmh_chains(n_datasets), pmmh_chains(n_datasets);

    parallel_for(2L * n_datasets, cfg.threads, [&](long job) {
        const int ds = static_cast<int>(job / 2);
        const bool is_slmh = (job % 2) == 0;
        const std::uint64_t ds_seed = derive_seed(cfg.seed, 10, ds);
        const Eigen::VectorXd y = datasets[ds].obs;
        if (is_slmh) {
            const Eigen::VectorXd s_obs = vole_summaries(y).values;
            slmh_chains[ds] = slmh(sim, s_obs, setup.m, setup.prior, setup.proposal,
                                   setup.init, setup.n_iter, setup.burn_in,
                                   setup.slmh_refresh, derive_seed(ds_seed, 2));
        } else {
            const VoleRunSetup& s = setup;
            SsmFactory factory = [&s, y](const Eigen::VectorXd& theta) {
                return std::unique_ptr<SsmModel>(
                    new VoleSsm(vole_params_from_vector(theta), s.times, y, s.dt));
            };
            pmmh_chains[ds] = pmmh(factory, setup.m, setup.pmmh_replicates, setup.prior,
                                   setup.proposal, setup.init, setup.n_iter, setup.burn_in,
                                   derive_seed(ds_seed, 3));
        }
    });

    json summary;
    for (int ds = 0; ds < n_datasets; ++ds) {
        write_chain(ctx, "chain_slmh_" + std::to_string(ds) + ".csv", slmh_chains[ds]);
        write_chain(ctx, "chain_pmmh_" + std::to_string(ds) + ".csv", pmmh_chains[ds]);
        summary["datasets"].push_back({
            {"dataset", ds},
            {"slmh", summary_rows_json(posterior_summary(slmh_chains[ds]))},
            {"pmmh", summary_rows_json(posterior_summary(pmmh_chains[ds]))},
            {"slmh_acceptance", slmh_chains[ds].acceptance_rate()},
            {"pmmh_acceptance", pmmh_chains[ds].acceptance_rate()},
        });
    }

    if (n_datasets >= 2) {
        const ParamVec truth_vec(vole_default_prior().names, vole_params_to_vector(truth));
        const auto comparison = compare_estimators(truth_vec, slmh_chains, pmmh_chains);
        Eigen::MatrixXd rows(static_cast<long>(comparison.size()), 6);
        for (size_t i = 0; i < comparison.size(); ++i) {
            rows(static_cast<long>(i), 0) = comparison[i].rmse_a;
            rows(static_cast<long>(i), 1) = comparison[i].rmse_b;
            rows(static_cast<long>(i), 2) = comparison[i].var_bias_ratio_a;
            rows(static_cast<long>(i), 3) = comparison[i].var_bias_ratio_b;
            rows(static_cast<long>(i), 4) = comparison[i].mean_logsq_diff;
            rows(static_cast<long>(i), 5) = comparison[i].p_value;
        }
        // Parameter names are written into the summary, the CSV is numeric.
        write_csv_file(ctx.file("comparison.csv"),
                       {"rmse_slmh", "rmse_pmmh", "var_bias_ratio_slmh",
                        "var_bias_ratio_pmmh", "mean_logsq_diff", "p_value"},
                       rows);
        ctx.add_output("comparison.csv");
        for (const auto& c : comparison)
            summary["comparison"].push_back({{"name", c.name},
                                             {"rmse_slmh", c.rmse_a},
                                             {"rmse_pmmh", c.rmse_b},
                                             {"p_value", c.p_value}});
    }
    write_json_file(ctx.file("summary.json"), summary);
    ctx.add_output("summary.json");
}

// ---------------------------------------------------------------------------
// kilpisjarvi-fit: field-data fit plus normality diagnostics.
// ---------------------------------------------------------------------------

void run_kilpisjarvi_fit(Ctx& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const std::string data_path = cfg.text("data_path", "data/voles_synthetic.csv");
    const ObservedSeries series = load_voles_csv(data_path);

    VoleRunSetup setup = vole_setup(cfg);
    setup.times = series.obs_times();
    const Eigen::VectorXd y = series.counts;
    const Eigen::VectorXd s_obs = vole_summaries(y).values;
    const std::string method = cfg.text("method", "both");

    const SummarySimulator sim = make_vole_summary_simulator(setup);
    json summary;
    summary["data_path"] = data_path;
    summary["n_obs"] = static_cast<long>(y.size());

    Chain slmh_chain;
    bool have_slmh = false;
    if (method == "slmh" || method == "both") {
        slmh_chain = slmh(sim, s_obs, setup.m, setup.prior, setup.proposal, setup.init,
                          setup.n_iter, setup.burn_in, setup.slmh_refresh,
                          derive_seed(cfg.seed, 2));
        write_chain(ctx, "chain_slmh.csv", slmh_chain);
        summary["slmh"] = summary_rows_json(posterior_summary(slmh_chain));
        summary["slmh_acceptance"] = slmh_chain.acceptance_rate();
        have_slmh = true;
    }
    if (method == "pmmh" || method == "both") {
        const VoleRunSetup& s = setup;
        SsmFactory factory = [&s, y](const Eigen::VectorXd& theta) {
            return std::unique_ptr<SsmModel>(
                new VoleSsm(vole_params_from_vector(theta), s.times, y, s.dt));
        };
        const Chain chain = pmmh(factory, setup.m, setup.pmmh_replicates, setup.prior,
                                 setup.proposal, setup.init, setup.n_iter, setup.burn_in,
                                 derive_seed(cfg.seed, 3));
        write_chain(ctx, "chain_pmmh.csv", chain);
        summary["pmmh"] = summary_rows_json(posterior_summary(chain));
        summary["pmmh_acceptance"] = chain.acceptance_rate();
        if (!have_slmh) slmh_chain = chain;  // normality check at whichever fit we have
    }

    // Normality of the statistics at the posterior mean (Krzanowski-style).
    const int m_norm = static_cast<int>(cfg.budget("n_normality_sims", 2000));
    const auto post = posterior_summary(slmh_chain);
    Eigen::VectorXd theta_hat(static_cast<long>(post.size()));
    for (size_t i = 0; i < post.size(); ++i) theta_hat[static_cast<long>(i)] = post[i].mean;

    Eigen::MatrixXd stats(m_norm, s_obs.size());
    parallel_for(m_norm, cfg.threads, [&](long i) {
        RngEngine rng = make_rng(cfg.seed, 4, static_cast<std::uint64_t>(i));
        stats.row(i) = sim(theta_hat, rng).transpose();
    });
    const NormalityReport report = krzanowski_report(stats, s_obs);
    Eigen::MatrixXd qq(report.chi2_sorted.size(), 2);
    qq.col(0) = report.chi2_theoretical;
    qq.col(1) = report.chi2_sorted;
    write_csv_file(ctx.file("qq.csv"), {"chi2_theoretical", "chi2_observed"}, qq);
    ctx.add_output("qq.csv");

    summary["obs_mahalanobis"] = report.obs_mahalanobis;
    summary["qq_slope"] = report.qq_slope();
    summary["n_normality_sims"] = m_norm;
    write_json_file(ctx.file("summary.json"), summary);
    ctx.add_output("summary.json");
}

// ---------------------------------------------------------------------------
// lyapunov-posterior: exponent distribution over posterior draws.
// ---------------------------------------------------------------------------

void run_lyapunov_posterior(Ctx& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const std::string chain_path = cfg.text("chain_path", "");
    if (chain_path.empty())
        throw std::invalid_argument("lyapunov-posterior: chain_path is required");
    const Chain chain =
        read_chain_csv(chain_path, static_cast<int>(cfg.integer("chain_burn_in", 0)));

    const int n_draws = static_cast<int>(cfg.budget("n_draws", 50));
    const long transient = cfg.budget("transient_months", 12000);
    const long horizon = cfg.budget("horizon_months", 2400);
    const double dt = cfg.number("dt", 0.01);

    const Eigen::VectorXd lambdas = lyapunov_posterior(
        chain, n_draws, transient, horizon, dt, derive_seed(cfg.seed, 1), cfg.threads);

    Eigen::MatrixXd rows(lambdas.size(), 2);
    std::vector<double> finite;
    for (long i = 0; i < lambdas.size(); ++i) {
        rows(i, 0) = i;
        rows(i, 1) = lambdas[i];
        if (std::isfinite(lambdas[i])) finite.push_back(lambdas[i]);
    }
    write_csv_file(ctx.file("lyapunov.csv"), {"draw", "lambda"}, rows);
    ctx.add_output("lyapunov.csv");

    json summary;
    summary["n_draws"] = n_draws;
    summary["n_failed"] = static_cast<long>(lambdas.size()) - static_cast<long>(finite.size());
    if (!finite.empty()) {
        Eigen::Map<Eigen::VectorXd> f(finite.data(), static_cast<long>(finite.size()));
        summary["median_lambda"] = lower_median(f);
        summary["mean_lambda"] = f.mean();
    }
    write_json_file(ctx.file("summary.json"), summary);
    ctx.add_output("summary.json");
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    RunResult result;
    json& manifest = result.manifest;
    manifest["schema_version"] = kConfigSchemaVersion;
    manifest["tool"] = "ssinfer";
    manifest["version"] = kToolVersion;
    manifest["experiment"] = cfg.experiment;
    manifest["seed"] = cfg.seed;
    manifest["threads"] = cfg.threads;
    manifest["config"] = cfg.raw;
    manifest["outputs"] = json::array();
    manifest["errors"] = json::array();

    fs::create_directories(cfg.out_dir);
    Ctx ctx{cfg, fs::path(cfg.out_dir), manifest};

    const auto start = std::chrono::steady_clock::now();
    try {
        if (cfg.experiment == "exp-sl-demo") run_exp_sl_demo(ctx);
        else if (cfg.experiment == "lgssm-oracle") run_lgssm_oracle(ctx);
        else if (cfg.experiment == "ricker-scaling") run_ricker_scaling(ctx);
        else if (cfg.experiment == "vole-sim-compare") run_vole_sim_compare(ctx);
        else if (cfg.experiment == "kilpisjarvi-fit") run_kilpisjarvi_fit(ctx);
        else if (cfg.experiment == "lyapunov-posterior") run_lyapunov_posterior(ctx);
        else throw std::invalid_argument("unknown experiment: " + cfg.experiment);
    } catch (const std::exception& err) {
        manifest["errors"].push_back(err.what());
        result.exit_code = 1;
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    manifest["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();

    write_json_file((ctx.dir / "manifest.json").string(), manifest);
    return result;
}

}  // namespace ssinfer
