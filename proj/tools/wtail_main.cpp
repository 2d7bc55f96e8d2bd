// wtail: conditional Weibull-tail estimation for censored data.
//
// Subcommands:
//   fit       estimate gamma(x) and an extreme conditional quantile from a CSV
//   simulate  run the Monte Carlo study and write MSE/MAE report files
//   qq        emit Weibull QQ-plot coordinates as CSV
//
// Exit codes: 0 success, 2 data/parse errors, 3 usage/config errors,
// 4 estimation errors.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "wtail/dataset.hpp"
#include "wtail/errors.hpp"
#include "wtail/montecarlo.hpp"
#include "wtail/tail.hpp"
#include "wtail/tuning.hpp"

namespace {

using nlohmann::json;

std::string out_dir_default() {
    if (const char* env = std::getenv("WTAIL_OUT_DIR")) {
        if (*env != '\0') return env;
    }
    return ".";
}

std::string fmt4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

wtail::HazardVariant hazard_from_name(const std::string& name) {
    if (name == "neg-log-km") return wtail::HazardVariant::neg_log_km;
    if (name == "nelson-aalen") return wtail::HazardVariant::nelson_aalen;
    throw wtail::config_error("unknown hazard variant '" + name + "'");
}

wtail::TailVariant variant_from_name(const std::string& name) {
    if (name == "censored") return wtail::TailVariant::censored;
    if (name == "complete-hazard") return wtail::TailVariant::complete_hazard;
    if (name == "complete-literal") return wtail::TailVariant::complete_literal;
    throw wtail::config_error("unknown estimator variant '" + name + "'");
}

std::vector<double> parse_x_grid(const std::string& spec) {
    std::vector<double> grid;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        grid.push_back(std::stod(tok));
    }
    if (grid.empty()) throw wtail::config_error("empty x grid");
    return grid;
}

struct FitOptions {
    std::string input;
    double x = 0.0;
    bool x_given = false;
    std::size_t k = 0;
    bool auto_k = false;
    double h = 0.0;
    double alpha = 0.05;
    std::string kernel = "asymmetric-linear";
    std::string hazard = "neg-log-km";
    std::string variant = "censored";
    bool uniform_weights = false;
    std::string out_dir;
    std::string json_name = "fit.json";
};

int run_fit(const FitOptions& opt) {
    const wtail::LoadedDataset ds = wtail::load_csv(opt.input);
    const wtail::KernelSpec kernel = wtail::KernelSpec::from_name(opt.kernel);
    const wtail::HazardVariant hazard = hazard_from_name(opt.hazard);
    const wtail::TailVariant variant = variant_from_name(opt.variant);

    if (!opt.uniform_weights && !opt.x_given) {
        throw wtail::config_error("--x is required unless --uniform-weights is set");
    }
    if (!opt.auto_k && opt.k == 0) {
        throw wtail::config_error("--k is required unless --auto-k is set");
    }

    std::cout << "dataset: " << opt.input << "  n=" << ds.summary.n
              << "  uncensored=" << ds.summary.n_uncensored;
    if (ds.summary.covariate_median) {
        std::cout << "  covariate median=" << fmt4(*ds.summary.covariate_median);
    }
    if (ds.summary.covariate_sd) {
        std::cout << " sd=" << fmt4(*ds.summary.covariate_sd);
    }
    std::cout << "\n";

    double h = opt.h;
    std::string h_source = "flag";
    if (opt.uniform_weights) {
        h = 0.0;
        h_source = "uniform";
    } else if (!(h > 0.0)) {
        const auto grid = wtail::BandwidthGrid::default_for(ds.sample);
        h = wtail::cv_bandwidth(ds.sample, grid, kernel).h;
        h_source = "cv";
    }

    std::optional<wtail::GammaProfile> profile;
    if (opt.uniform_weights) {
        profile.emplace(ds.sample, std::vector<double>(ds.sample.size(), 1.0),
                        variant, hazard);
    } else {
        profile.emplace(ds.sample, opt.x, wtail::Bandwidth{h}, kernel, variant,
                        hazard);
    }

    std::size_t k = opt.k;
    std::string k_source = "flag";
    if (opt.auto_k) {
        k = wtail::select_k(profile->gammas()).chosen_k;
        k_source = "block-rule";
    }

    const wtail::TailEstimate est = profile->gamma_at(k);
    const double lam_yn = profile->hazard_at_threshold(k);
    const wtail::QuantileEstimate q =
        wtail::weissman_quantile(opt.alpha, est, lam_yn);

    std::cout << "kernel=" << kernel.name() << " hazard=" << opt.hazard
              << " variant=" << opt.variant
              << (opt.uniform_weights ? " weights=uniform" : "") << "\n";
    if (!opt.uniform_weights) {
        std::cout << "x=" << fmt4(opt.x) << " h=" << fmt4(h) << " (" << h_source
                  << ") ";
    }
    std::cout << "k=" << k << " (" << k_source << ") y_n=" << fmt4(est.y_n)
              << " exceedances=" << est.n_exceedances << "\n";
    std::cout << "gamma=" << fmt4(est.gamma_hat) << "  q(" << fmt4(opt.alpha)
              << ")=" << fmt4(q.q_hat) << "\n";
    if (est.degenerate_tail) {
        std::cout << "warning: degenerate tail (all exceedances equal)\n";
    }

    if (!opt.json_name.empty() && opt.json_name != "-") {
        json j;
        j["input"] = opt.input;
        j["n"] = ds.summary.n;
        j["n_uncensored"] = ds.summary.n_uncensored;
        if (ds.summary.covariate_median) {
            j["covariate_median"] = *ds.summary.covariate_median;
        }
        if (ds.summary.covariate_sd) j["covariate_sd"] = *ds.summary.covariate_sd;
        j["uniform_weights"] = opt.uniform_weights;
        if (!opt.uniform_weights) j["x"] = opt.x;
        j["h"] = h;
        j["h_source"] = h_source;
        j["k"] = k;
        j["k_source"] = k_source;
        j["alpha"] = opt.alpha;
        j["kernel"] = kernel.name();
        j["hazard"] = opt.hazard;
        j["variant"] = opt.variant;
        j["y_n"] = est.y_n;
        j["hazard_at_yn"] = lam_yn;
        j["n_exceedances"] = est.n_exceedances;
        j["gamma_hat"] = est.gamma_hat;
        j["degenerate_tail"] = est.degenerate_tail;
        j["dropped_infinite_terminal"] = est.dropped_infinite_terminal;
        j["q_hat"] = q.q_hat;
        const std::filesystem::path path =
            std::filesystem::path(opt.out_dir) / opt.json_name;
        std::ofstream out(path);
        if (!out) throw wtail::config_error("cannot write " + path.string());
        out << j.dump(2) << "\n";
        std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
}

struct SimulateOptions {
    std::size_t n = 500;
    std::size_t reps = 100;
    std::string scenario;
    std::uint64_t seed = 0;
    std::string x_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    double alpha = 1.0 - 1.0 / 1000.0;
    std::string kernel = "asymmetric-linear";
    std::string hazard = "neg-log-km";
    double h = 0.3;
    std::size_t k = 50;
    bool auto_tune = false;
    double censor_ratio = 0.0;
    unsigned threads = 0;
    std::string out_dir;
};

int run_simulate(const SimulateOptions& opt) {
    wtail::CensorRelation relation;
    if (opt.scenario == "lt") {
        relation = wtail::CensorRelation::lighter;
    } else if (opt.scenario == "eq") {
        relation = wtail::CensorRelation::equal;
    } else if (opt.scenario == "gt") {
        relation = wtail::CensorRelation::heavier;
    } else {
        throw wtail::config_error("--scenario must be lt, eq or gt");
    }
    const wtail::ScenarioSpec scenario =
        opt.censor_ratio > 0.0
            ? wtail::ScenarioSpec::with_ratio(relation, opt.censor_ratio)
            : wtail::ScenarioSpec::make(relation);

    wtail::McConfig cfg;
    cfg.n = opt.n;
    cfg.reps = opt.reps;
    cfg.seed = opt.seed;
    cfg.x_grid = parse_x_grid(opt.x_grid);
    cfg.survival_level = opt.alpha;
    cfg.kernel = wtail::KernelSpec::from_name(opt.kernel);
    cfg.hazard_variant = hazard_from_name(opt.hazard);
    cfg.auto_tune = opt.auto_tune;
    cfg.fixed_h = opt.h;
    cfg.fixed_k = opt.k;
    cfg.threads = opt.threads;

    const wtail::McReport report = wtail::run_monte_carlo(cfg, scenario);

    std::filesystem::create_directories(opt.out_dir);
    const auto csv_path = std::filesystem::path(opt.out_dir) / "mc_report.csv";
    const auto json_path = std::filesystem::path(opt.out_dir) / "mc_report.json";
    {
        std::ofstream csv(csv_path);
        if (!csv) throw wtail::config_error("cannot write " + csv_path.string());
        wtail::write_report_csv(report, csv);
    }
    {
        std::ofstream js(json_path);
        if (!js) throw wtail::config_error("cannot write " + json_path.string());
        wtail::write_report_json(report, js);
    }

    std::cout << "scenario=" << wtail::censor_relation_name(scenario.relation)
              << " (gamma_C = " << fmt4(scenario.censor_ratio)
              << " * gamma_Y)  n=" << cfg.n << " reps=" << cfg.reps
              << " seed=" << cfg.seed << "\n";
    std::cout << "x        estimator             truth     mse        mae       "
                 "used/failed\n";
    for (const auto& c : report.cells) {
        std::printf("%-8.4f %-21s %-9.4f %-10.6f %-9.4f %zu/%zu\n", c.x,
                    c.estimator.c_str(), c.truth, c.mse, c.mae, c.reps_used,
                    c.reps_failed);
    }
    std::cout << "wrote " << csv_path.string() << " and " << json_path.string()
              << "\n";
    return 0;
}

struct QqOptions {
    std::string input;
    std::size_t k = 0;
    std::string out = "-";
};

int run_qq(const QqOptions& opt) {
    const wtail::LoadedDataset ds = wtail::load_csv(opt.input);
    const auto pts = wtail::qq_points(ds.sample, opt.k);
    if (opt.out == "-") {
        wtail::write_qq_csv(pts, std::cout);
    } else {
        std::ofstream out(opt.out);
        if (!out) throw wtail::config_error("cannot write " + opt.out);
        wtail::write_qq_csv(pts, out);
        std::cout << "wrote " << opt.out << " (" << pts.size() << " points)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional Weibull-tail coefficient and extreme quantile "
                 "estimation under right censoring"};
    app.require_subcommand(1);
    // --h is a bandwidth below; keep help on --help only
    app.set_help_flag("--help", "Print help and exit");

    FitOptions fit;
    fit.out_dir = out_dir_default();
    auto* fit_cmd = app.add_subcommand("fit", "Estimate gamma(x) and a quantile");
    fit_cmd->set_help_flag("--help", "Print help and exit");
    fit_cmd->add_option("--input", fit.input, "Input CSV (time,delta,covariate)")
        ->required();
    auto* xopt = fit_cmd->add_option("--x", fit.x, "Covariate value");
    fit_cmd->add_option("--k", fit.k, "Threshold count");
    fit_cmd->add_flag("--auto-k", fit.auto_k, "Select k by the block rule");
    fit_cmd->add_option("--h", fit.h, "Bandwidth (default: cross-validated)");
    fit_cmd->add_option("--alpha", fit.alpha,
                        "Survival level p: estimate q with P(Y > q | x) = p");
    fit_cmd->add_option("--kernel", fit.kernel,
                        "asymmetric-linear or biquadratic");
    fit_cmd->add_option("--hazard", fit.hazard, "neg-log-km or nelson-aalen");
    fit_cmd->add_option("--variant", fit.variant,
                        "censored, complete-hazard or complete-literal");
    fit_cmd->add_flag("--uniform-weights", fit.uniform_weights,
                      "Ignore the covariate: unit weight for every observation");
    fit_cmd->add_option("--out", fit.out_dir, "Output directory");
    fit_cmd->add_option("--json", fit.json_name, "JSON result filename (- skips)");

    SimulateOptions sim;
    sim.out_dir = out_dir_default();
    auto* sim_cmd = app.add_subcommand("simulate", "Run the Monte Carlo study");
    sim_cmd->set_help_flag("--help", "Print help and exit");
    sim_cmd->add_option("--n", sim.n, "Sample size per replication");
    sim_cmd->add_option("--reps", sim.reps, "Number of replications");
    sim_cmd->add_option("--scenario", sim.scenario, "lt, eq or gt")->required();
    sim_cmd->add_option("--seed", sim.seed, "Master seed")->required();
    sim_cmd->add_option("--x-grid", sim.x_grid, "Comma-separated covariates");
    sim_cmd->add_option("--alpha", sim.alpha, "Survival level for the quantile");
    sim_cmd->add_option("--kernel", sim.kernel, "Kernel name");
    sim_cmd->add_option("--hazard", sim.hazard, "Hazard variant");
    sim_cmd->add_option("--h", sim.h, "Fixed bandwidth");
    sim_cmd->add_option("--k", sim.k, "Fixed threshold count");
    sim_cmd->add_flag("--auto", sim.auto_tune,
                      "Select h by CV and k by the block rule per replication");
    sim_cmd->add_option("--censor-ratio", sim.censor_ratio,
                        "Override gamma_C / gamma_Y");
    sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all)");
    sim_cmd->add_option("--out", sim.out_dir, "Output directory");

    QqOptions qq;
    auto* qq_cmd = app.add_subcommand("qq", "Weibull QQ-plot coordinates");
    qq_cmd->set_help_flag("--help", "Print help and exit");
    qq_cmd->add_option("--input", qq.input, "Input CSV")->required();
    qq_cmd->add_option("--k", qq.k, "Number of upper order statistics")->required();
    qq_cmd->add_option("--out", qq.out, "Output file (- for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return static_cast<int>(wtail::error_family::config);
    }

    try {
        fit.x_given = xopt->count() > 0;
        if (fit_cmd->parsed()) return run_fit(fit);
        if (sim_cmd->parsed()) return run_simulate(sim);
        if (qq_cmd->parsed()) return run_qq(qq);
    } catch (const wtail::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.family());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(wtail::error_family::config);
    }
    return 0;
}
