#include "ssinfer/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssinfer/abc.hpp"
#include "ssinfer/config.hpp"
#include "ssinfer/csv.hpp"
#include "ssinfer/diagnostics.hpp"
#include "ssinfer/errors.hpp"
#include "ssinfer/experiments.hpp"
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

json load_config_json(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j;
    in >> j;
    return j;
}

double jnum(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

long jint(const json& j, const std::string& key, long fallback) {
    return j.contains(key) ? j.at(key).get<long>() : fallback;
}

std::string jtext(const json& j, const std::string& key, const std::string& fallback) {
    return j.contains(key) ? j.at(key).get<std::string>() : fallback;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

/// Deterministic command record next to the outputs (no timing inside, so
/// reruns with the same seed reproduce every file byte for byte).
void write_command_manifest(const std::string& dir, const std::string& command,
                            std::uint64_t seed, const json& config,
                            const std::vector<std::string>& outputs) {
    json manifest = {
        {"schema_version", kConfigSchemaVersion},
        {"tool", "ssinfer"},
        {"version", kToolVersion},
        {"command", command},
        {"seed", seed},
        {"config", config},
        {"outputs", outputs},
    };
    write_json_file((fs::path(dir) / "manifest.json").string(), manifest);
}

VoleParams vole_params_from_json(const json& j) {
    ParamVec pv(vole_default_prior().names, vole_params_to_vector(vole_study_truth()));
    if (j.contains("theta"))
        for (const auto& [key, value] : j.at("theta").items()) pv.set(key, value.get<double>());
    return vole_params_from_vector(pv.values);
}

RickerParams ricker_params_from_json(const json& j) {
    RickerParams p{3.8, 0.3, 10.0};
    if (j.contains("theta")) {
        const json& t = j.at("theta");
        p.log_r = jnum(t, "log_r", p.log_r);
        p.sigma2 = jnum(t, "sigma2", p.sigma2);
        p.phi = jnum(t, "phi", p.phi);
    }
    return p;
}

LgSsmParams lgssm_params_from_json(const json& j) {
    LgSsmParams p;
    if (j.contains("theta")) {
        const json& t = j.at("theta");
        p.a_coef = jnum(t, "a", p.a_coef);
        p.c_coef = jnum(t, "c", p.c_coef);
        p.q_var = jnum(t, "q", p.q_var);
        p.r_var = jnum(t, "r", p.r_var);
        p.m0 = jnum(t, "m0", p.m0);
        p.p0 = jnum(t, "p0", p.p0);
    }
    return p;
}

/// Observed counts plus observation times, from either a voles-format file
/// or a trajectory CSV with time/obs columns.
std::pair<Eigen::VectorXd, Eigen::VectorXd> load_obs_series(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw std::runtime_error("cannot open: " + path);
    std::string first;
    std::getline(probe, first);
    if (!first.empty() && first.back() == '\r') first.pop_back();
    probe.close();
    if (first == "year,season,index") {
        const ObservedSeries series = load_voles_csv(path);
        return {series.obs_times(), series.counts};
    }
    const auto table = read_csv_file(path);
    return {csv_column(table, "time"), csv_column(table, "obs")};
}

int cmd_simulate(const std::string& model, const std::string& config_path,
                 std::uint64_t seed, const std::string& out_dir) {
    const json cfg = load_config_json(config_path);
    fs::create_directories(out_dir);
    std::vector<std::string> outputs;

    if (model == "exponential") {
        const Eigen::VectorXd x = exponential_simulate(jnum(cfg, "alpha", 1.0),
                                                       static_cast<int>(jint(cfg, "N", 10)), seed);
        Eigen::MatrixXd rows(x.size(), 2);
        for (long i = 0; i < x.size(); ++i) {
            rows(i, 0) = i;
            rows(i, 1) = x[i];
        }
        write_csv_file((fs::path(out_dir) / "sample.csv").string(), {"index", "value"}, rows);
        outputs.push_back("sample.csv");
    } else {
        Trajectory traj;
        if (model == "ricker") {
            traj = ricker_simulate(ricker_params_from_json(cfg),
                                   static_cast<int>(jint(cfg, "T", 50)),
                                   jnum(cfg, "n0", 1.0), seed);
        } else if (model == "vole") {
            const Eigen::VectorXd times = semiannual_obs_times(
                static_cast<int>(jint(cfg, "first_year", 1)),
                static_cast<int>(jint(cfg, "n_years", 45)));
            traj = vole_simulate(vole_params_from_json(cfg), times, jnum(cfg, "dt", 0.01),
                                 jnum(cfg, "warmup", 10.0),
                                 {jnum(cfg, "n0", 0.5), jnum(cfg, "p0", 0.1)}, seed);
        } else if (model == "lgssm") {
            traj = lg_ssm_simulate(lgssm_params_from_json(cfg),
                                   static_cast<int>(jint(cfg, "T", 50)), seed);
        } else {
            throw std::invalid_argument("unknown model: " + model);
        }
        std::ofstream out((fs::path(out_dir) / "trajectory.csv").string(), std::ios::binary);
        traj.write_csv(out);
        outputs.push_back("trajectory.csv");
    }
    write_command_manifest(out_dir, "simulate " + model, seed, cfg, outputs);
    std::cout << "wrote " << outputs.front() << " to " << out_dir << "\n";
    return 0;
}

int cmd_summarize(const std::string& stats, const std::string& input,
                  const std::string& column, const std::string& out_dir) {
    const auto table = read_csv_file(input);
    const Eigen::VectorXd y = csv_column(table, column);
    const SummaryVector s = stats == "vole" ? vole_summaries(y) : ricker_summaries(y);
    fs::create_directories(out_dir);
    Eigen::MatrixXd row(1, s.size());
    row.row(0) = s.values.transpose();
    write_csv_file((fs::path(out_dir) / "summary.csv").string(), s.names, row);
    std::cout << "wrote summary.csv (" << s.size() << " statistics, degenerate="
              << (s.degenerate ? "true" : "false") << ")\n";
    return 0;
}

int cmd_sl_eval(const std::string& model, const std::string& data_path,
                const std::string& config_path, int m, std::uint64_t seed,
                const std::string& out_dir, int threads) {
    const json cfg = load_config_json(config_path);
    const auto [times, y] = load_obs_series(data_path);
    fs::create_directories(out_dir);

    Eigen::VectorXd s_obs;
    StatSimulator sim;
    if (model == "vole") {
        const VoleParams p = vole_params_from_json(cfg);
        s_obs = vole_summaries(y).values;
        const double dt = jnum(cfg, "dt", 0.01);
        const double warmup = jnum(cfg, "warmup", 10.0);
        const Eigen::VectorXd obs_times = times;
        sim = [p, obs_times, dt, warmup](RngEngine& rng) {
            std::uniform_real_distribution<double> unif(0.01, 1.0);
            const double n0 = unif(rng);
            const double p0 = unif(rng);
            return vole_summaries(
                       vole_simulate(p, obs_times, dt, warmup, {n0, p0}, rng).obs)
                .values;
        };
    } else if (model == "ricker") {
        const RickerParams p = ricker_params_from_json(cfg);
        s_obs = ricker_summaries(y).values;
        const int T = static_cast<int>(y.size());
        sim = [p, T](RngEngine& rng) {
            return ricker_summaries(ricker_simulate(p, T, 1.0, rng).obs).values;
        };
    } else {
        throw std::invalid_argument("sl-eval supports models: vole, ricker");
    }

    SynlikOptions options;
    options.threads = threads;
    const SynlikFit fit = sl_estimate(sim, s_obs, m, seed, options);

    json out = {{"m", fit.m}, {"log_sl", fit.log_sl}, {"n_failed", fit.n_failed}};
    for (long i = 0; i < fit.mu_hat.size(); ++i) out["mu"].push_back(fit.mu_hat[i]);
    for (long i = 0; i < fit.sigma_hat.rows(); ++i) {
        json row = json::array();
        for (long j = 0; j < fit.sigma_hat.cols(); ++j) row.push_back(fit.sigma_hat(i, j));
        out["sigma"].push_back(row);
    }
    write_json_file((fs::path(out_dir) / "synlik.json").string(), out);
    write_command_manifest(out_dir, "sl-eval " + model, seed, cfg, {"synlik.json"});
    std::cout << "log_sl = " << fit.log_sl << "\n";
    return 0;
}

int cmd_pf_eval(const std::string& model, const std::string& data_path,
                const std::string& config_path, int particles, int replicates,
                std::uint64_t seed, const std::string& out_dir, bool diag, int threads) {
    const json cfg = load_config_json(config_path);
    const auto [times, y] = load_obs_series(data_path);
    fs::create_directories(out_dir);

    std::unique_ptr<SsmModel> ssm;
    if (model == "vole") {
        ssm = std::make_unique<VoleSsm>(vole_params_from_json(cfg), times, y,
                                        jnum(cfg, "dt", 0.01));
    } else if (model == "lgssm") {
        ssm = std::make_unique<LgSsm>(lgssm_params_from_json(cfg), y);
    } else {
        throw std::invalid_argument("pf-eval supports models: vole, lgssm");
    }

    std::vector<std::string> outputs = {"loglik.json"};
    json out;
    if (replicates > 1) {
        const LogLikEstimate est =
            averaged_loglik(*ssm, particles * replicates, replicates, seed, threads);
        out = {{"loglik", est.value}, {"method", "SIR"}, {"budget", est.budget},
               {"replicates", replicates}, {"seed", seed}};
    } else {
        std::vector<PfStepDiag> steps;
        const LogLikEstimate est = sir_loglik(*ssm, particles, seed, diag ? &steps : nullptr);
        out = {{"loglik", est.value}, {"method", "SIR"}, {"budget", est.budget},
               {"replicates", 1}, {"seed", seed}};
        if (est.fail_index >= 0) out["fail_index"] = est.fail_index;
        if (diag) {
            Eigen::MatrixXd rows(static_cast<long>(steps.size()), 3);
            for (size_t i = 0; i < steps.size(); ++i) {
                rows(static_cast<long>(i), 0) = static_cast<double>(i);
                rows(static_cast<long>(i), 1) = steps[i].ess;
                rows(static_cast<long>(i), 2) = steps[i].log_increment;
            }
            write_csv_file((fs::path(out_dir) / "pf_diag.csv").string(),
                           {"step", "ess", "log_increment"}, rows);
            outputs.push_back("pf_diag.csv");
        }
    }
    write_json_file((fs::path(out_dir) / "loglik.json").string(), out);
    write_command_manifest(out_dir, "pf-eval " + model, seed, cfg, outputs);
    std::cout << "loglik = " << out["loglik"].get<double>() << "\n";
    return 0;
}

int cmd_abc(const json& cfg, std::uint64_t seed, const std::string& out_dir, int threads) {
    if (jtext(cfg, "model", "ricker") != "ricker")
        throw std::invalid_argument("abc supports model: ricker");
    const std::string method = jtext(cfg, "method", "smc");
    const int T = static_cast<int>(jint(cfg, "T", 50));
    fs::create_directories(out_dir);

    // Observed statistics: either a data file or data simulated at theta.
    Eigen::VectorXd s_obs;
    const std::string data_path = jtext(cfg, "data_path", "");
    if (!data_path.empty()) {
        const auto [times, y] = load_obs_series(data_path);
        (void)times;
        s_obs = ricker_summaries(y).values;
    } else {
        const RickerParams truth = ricker_params_from_json(cfg);
        s_obs =
            ricker_summaries(ricker_simulate(truth, T, 1.0, derive_seed(seed, 1)).obs).values;
    }
    const int d = static_cast<int>(s_obs.size());

    const PriorSpec prior = ricker_abc_prior();
    SummarySimulator sim = [T](const Eigen::VectorXd& theta, RngEngine& rng) {
        RickerParams p{theta[0], theta[1], theta[2]};
        return ricker_summaries(ricker_simulate(p, T, 1.0, rng).obs).values;
    };

    // Scaling matrix: identity, or estimated at theta_p.
    ScalingMatrix a = ScalingMatrix::identity(d);
    if (jtext(cfg, "scaling", "estimated") == "estimated") {
        RickerParams theta_p = ricker_params_from_json(cfg);
        if (cfg.contains("theta_p")) {
            const json& t = cfg.at("theta_p");
            theta_p.log_r = jnum(t, "log_r", theta_p.log_r);
            theta_p.sigma2 = jnum(t, "sigma2", theta_p.sigma2);
            theta_p.phi = jnum(t, "phi", theta_p.phi);
        }
        const long n_cov = jint(cfg, "n_cov_sims", 10000);
        Eigen::MatrixXd stats(n_cov, d);
        parallel_for(n_cov, threads, [&](long i) {
            stats.row(i) = ricker_summaries(
                               ricker_simulate(theta_p, T, 1.0,
                                               derive_seed(seed, 2, static_cast<std::uint64_t>(i)))
                                   .obs)
                               .values.transpose();
        });
        auto [mu, sigma] = sample_mean_cov(stats);
        (void)mu;
        Eigen::LLT<Eigen::MatrixXd> llt(sigma);
        if (llt.info() != Eigen::Success)
            throw SingularCovariance("abc: statistic covariance singular");
        a.a = llt.solve(Eigen::MatrixXd::Identity(d, d));
        a.a = ((a.a + a.a.transpose()) / 2.0).eval();
    }

    std::vector<std::string> outputs;
    json summary;
    if (method == "rejection") {
        const AbcRejectionResult res =
            abc_rejection(prior, sim, s_obs, jint(cfg, "m_total", 20000),
                          jnum(cfg, "h", 50.0), a, derive_seed(seed, 3), threads);
        Eigen::MatrixXd rows(res.accepted.rows(), prior.size() + 1);
        rows.leftCols(prior.size()) = res.accepted;
        rows.col(prior.size()) = res.distances;
        std::vector<std::string> header = prior.names;
        header.push_back("distance");
        write_csv_file((fs::path(out_dir) / "accepted.csv").string(), header, rows);
        outputs.push_back("accepted.csv");
        summary = {{"n_proposed", res.n_proposed},
                   {"n_accepted", res.accepted.rows()},
                   {"empty", res.empty_warning}};
    } else if (method == "smc") {
        SmcAbcOptions options;
        options.threads = threads;
        options.max_sims_per_round = jint(cfg, "max_sims_per_round", 0);
        const auto populations =
            smc_abc(prior, sim, s_obs, static_cast<int>(jint(cfg, "n_pop", 200)), a,
                    jnum(cfg, "stop_accept_ratio", 0.01), derive_seed(seed, 3), options);
        long total_rows = 0;
        for (const auto& pop : populations) total_rows += pop.particles.rows();
        Eigen::MatrixXd rows(total_rows, prior.size() + 4);
        long r = 0;
        for (size_t round = 0; round < populations.size(); ++round) {
            const auto& pop = populations[round];
            for (long i = 0; i < pop.particles.rows(); ++i, ++r) {
                rows(r, 0) = static_cast<double>(round);
                rows.block(r, 1, 1, prior.size()) = pop.particles.row(i);
                rows(r, prior.size() + 1) = pop.weights[i];
                rows(r, prior.size() + 2) = pop.distances[i];
                rows(r, prior.size() + 3) = pop.tolerance;
            }
        }
        std::vector<std::string> header = {"round"};
        for (const auto& n : prior.names) header.push_back(n);
        header.push_back("weight");
        header.push_back("distance");
        header.push_back("tolerance");
        write_csv_file((fs::path(out_dir) / "populations.csv").string(), header, rows);
        outputs.push_back("populations.csv");
        json tolerances = json::array();
        for (const auto& pop : populations) tolerances.push_back(pop.tolerance);
        summary = {{"rounds", populations.size()},
                   {"final_tolerance", populations.back().tolerance},
                   {"final_acceptance_ratio", populations.back().acceptance_ratio},
                   {"tolerance_trace", tolerances}};
    } else {
        throw std::invalid_argument("abc method must be rejection or smc");
    }
    write_json_file((fs::path(out_dir) / "summary.json").string(), summary);
    outputs.push_back("summary.json");
    write_command_manifest(out_dir, "abc " + method, seed, cfg, outputs);
    std::cout << "abc " << method << " done\n";
    return 0;
}

int cmd_diagnose(const std::string& task, const json& cfg, std::uint64_t seed,
                 const std::string& out_dir, int threads) {
    fs::create_directories(out_dir);
    if (task == "krzanowski") {
        const std::string data_path = jtext(cfg, "data_path", "");
        if (data_path.empty())
            throw std::invalid_argument("diagnose krzanowski: data_path required");
        const auto [times, y] = load_obs_series(data_path);
        const Eigen::VectorXd s_obs = vole_summaries(y).values;
        const VoleParams p = vole_params_from_json(cfg);
        const double dt = jnum(cfg, "dt", 0.01);
        const double warmup = jnum(cfg, "warmup", 10.0);
        const long m = jint(cfg, "m", 2000);
        const Eigen::VectorXd obs_times = times;

        Eigen::MatrixXd stats(m, s_obs.size());
        parallel_for(m, threads, [&](long i) {
            RngEngine rng = make_rng(seed, 1, static_cast<std::uint64_t>(i));
            std::uniform_real_distribution<double> unif(0.01, 1.0);
            const double n0 = unif(rng);
            const double p0 = unif(rng);
            stats.row(i) =
                vole_summaries(vole_simulate(p, obs_times, dt, warmup, {n0, p0}, rng).obs)
                    .values.transpose();
        });
        const NormalityReport report = krzanowski_report(stats, s_obs);
        Eigen::MatrixXd qq(report.chi2_sorted.size(), 2);
        qq.col(0) = report.chi2_theoretical;
        qq.col(1) = report.chi2_sorted;
        write_csv_file((fs::path(out_dir) / "qq.csv").string(),
                       {"chi2_theoretical", "chi2_observed"}, qq);

        Eigen::MatrixXd marg(report.marginal_sorted.rows(),
                             2 * report.marginal_sorted.cols());
        std::vector<std::string> header;
        const SummaryVector names_probe = vole_summaries(y);
        for (long j = 0; j < report.marginal_sorted.cols(); ++j) {
            header.push_back(names_probe.names[j] + "_theoretical");
            header.push_back(names_probe.names[j] + "_observed");
            marg.col(2 * j) = report.marginal_theoretical.col(j);
            marg.col(2 * j + 1) = report.marginal_sorted.col(j);
        }
        write_csv_file((fs::path(out_dir) / "qq_marginal.csv").string(), header, marg);

        write_json_file((fs::path(out_dir) / "report.json").string(),
                        {{"obs_mahalanobis", report.obs_mahalanobis},
                         {"qq_slope", report.qq_slope()},
                         {"jittered", report.jittered},
                         {"m", m}});
        write_command_manifest(out_dir, "diagnose krzanowski", seed, cfg,
                               {"qq.csv", "qq_marginal.csv", "report.json"});
        std::cout << "qq_slope = " << report.qq_slope() << "\n";
        return 0;
    }
    if (task == "lyapunov") {
        const long transient = jint(cfg, "transient_months", 12000);
        const long horizon = jint(cfg, "horizon_months", 2400);
        const double dt = jnum(cfg, "dt", 0.01);
        const std::string chain_path = jtext(cfg, "chain_path", "");
        if (!chain_path.empty()) {
            const Chain chain =
                read_chain_csv(chain_path, static_cast<int>(jint(cfg, "chain_burn_in", 0)));
            const int n_draws = static_cast<int>(jint(cfg, "n_draws", 50));
            const Eigen::VectorXd lambdas = lyapunov_posterior(
                chain, n_draws, transient, horizon, dt, derive_seed(seed, 1), threads);
            Eigen::MatrixXd rows(lambdas.size(), 2);
            for (long i = 0; i < lambdas.size(); ++i) {
                rows(i, 0) = i;
                rows(i, 1) = lambdas[i];
            }
            write_csv_file((fs::path(out_dir) / "lyapunov.csv").string(), {"draw", "lambda"},
                           rows);
            write_command_manifest(out_dir, "diagnose lyapunov", seed, cfg, {"lyapunov.csv"});
            std::cout << "wrote lyapunov.csv (" << n_draws << " draws)\n";
            return 0;
        }
        const VoleParams p = vole_params_from_json(cfg);
        const LyapunovResult res = vole_lyapunov(p, transient, horizon, dt, seed);
        write_json_file((fs::path(out_dir) / "lyapunov.json").string(),
                        {{"lambda_max", res.lambda_max},
                         {"transient_months", res.transient_units},
                         {"horizon_months", res.horizon_units}});
        write_command_manifest(out_dir, "diagnose lyapunov", seed, cfg, {"lyapunov.json"});
        std::cout << "lambda_max = " << res.lambda_max << "\n";
        return 0;
    }
    throw std::invalid_argument("diagnose task must be krzanowski or lyapunov");
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Simulation-based inference for partially observed dynamic models"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "runs", model, stats = "vole", input, column = "obs";
    std::string task = "krzanowski";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1, m = 500, particles = 500, replicates = 1;
    bool diag = false;

    auto add_common = [&](CLI::App* cmd, bool needs_seed) {
        cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
        cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        auto* opt = cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { seed = s; seed_given = true; },
            "RNG seed (required for stochastic commands)");
        if (needs_seed) opt->required();
    };

    auto* sim = app.add_subcommand("simulate", "simulate a model trajectory");
    sim->add_option("--model", model, "ricker|vole|lgssm|exponential")->required();
    sim->add_option("--config", config_path, "JSON parameter overrides");
    add_common(sim, true);

    auto* summ = app.add_subcommand("summarize", "summary statistics of a series");
    summ->add_option("--stats", stats, "vole|ricker")->capture_default_str();
    summ->add_option("--input", input, "CSV with the observation column")->required();
    summ->add_option("--column", column, "column name")->capture_default_str();
    summ->add_option("--out", out_dir, "output directory")->capture_default_str();

    auto* sl = app.add_subcommand("sl-eval", "synthetic log-likelihood at theta");
    sl->add_option("--model", model, "vole|ricker")->required();
    sl->add_option("--data", input, "observed series CSV")->required();
    sl->add_option("--config", config_path, "JSON with theta and options");
    sl->add_option("--m", m, "simulation budget")->capture_default_str();
    add_common(sl, true);

    auto* pf = app.add_subcommand("pf-eval", "SIR log-likelihood estimate at theta");
    pf->add_option("--model", model, "vole|lgssm")->required();
    pf->add_option("--data", input, "observed series CSV")->required();
    pf->add_option("--config", config_path, "JSON with theta and options");
    pf->add_option("--particles", particles, "particles per filter")->capture_default_str();
    pf->add_option("--replicates", replicates, "averaged replicate filters")
        ->capture_default_str();
    pf->add_flag("--diag", diag, "write per-step ESS/log-increment CSV");
    add_common(pf, true);

    auto* mcmc_cmd = app.add_subcommand("mcmc", "SLMH/PMMH fit of the vole model");
    mcmc_cmd->add_option("--config", config_path, "experiment config JSON")->required();
    add_common(mcmc_cmd, false);

    auto* abc_cmd = app.add_subcommand("abc", "ABC rejection / SMC-ABC on the Ricker model");
    abc_cmd->add_option("--config", config_path, "ABC config JSON");
    add_common(abc_cmd, true);

    auto* exp_cmd = app.add_subcommand("experiment", "run a tagged experiment end to end");
    exp_cmd->add_option("--config", config_path, "experiment config JSON (or manifest)")
        ->required();
    add_common(exp_cmd, false);

    auto* diag_cmd = app.add_subcommand("diagnose", "normality / Lyapunov diagnostics");
    diag_cmd->add_option("--task", task, "krzanowski|lyapunov")->capture_default_str();
    diag_cmd->add_option("--config", config_path, "diagnostic config JSON");
    add_common(diag_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) return cmd_simulate(model, config_path, seed, out_dir);
        if (summ->parsed()) return cmd_summarize(stats, input, column, out_dir);
        if (sl->parsed())
            return cmd_sl_eval(model, input, config_path, m, seed, out_dir, threads);
        if (pf->parsed())
            return cmd_pf_eval(model, input, config_path, particles, replicates, seed,
                               out_dir, diag, threads);
        if (abc_cmd->parsed())
            return cmd_abc(load_config_json(config_path), seed, out_dir, threads);
        if (diag_cmd->parsed())
            return cmd_diagnose(task, load_config_json(config_path), seed, out_dir, threads);
        if (mcmc_cmd->parsed() || exp_cmd->parsed()) {
            nlohmann::json doc = load_config_json(config_path);
            if (mcmc_cmd->parsed() && !doc.contains("experiment"))
                doc["experiment"] = "kilpisjarvi-fit";
            if (seed_given) doc["seed"] = seed;
            if (exp_cmd->count("--out") || mcmc_cmd->count("--out")) doc["out_dir"] = out_dir;
            if (!doc.contains("out_dir")) doc["out_dir"] = out_dir;
            doc["threads"] = threads;
            const ExperimentConfig cfg = ExperimentConfig::from_json(doc);
            const RunResult result = run_experiment(cfg);
            for (const auto& err : result.manifest["errors"])
                std::cerr << "error: " << err.get<std::string>() << "\n";
            std::cout << "experiment " << cfg.experiment << " finished, outputs in "
                      << cfg.out_dir << "\n";
            return result.exit_code;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace ssinfer
