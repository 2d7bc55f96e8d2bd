#include "wtail/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "wtail/errors.hpp"
#include "wtail/rng.hpp"
#include "wtail/tail.hpp"
#include "wtail/tuning.hpp"

namespace wtail {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double true_gamma(double x) {
    return 0.5 * (0.1 + std::sin(kPi * x)) *
           (1.1 - 0.5 * std::exp(-64.0 * (x - 0.5) * (x - 0.5)));
}

double true_quantile(double survival_level, double x) {
    if (!(survival_level > 0.0) || !(survival_level < 1.0)) {
        throw invalid_level("survival level must lie strictly between 0 and 1");
    }
    return std::pow(-std::log(survival_level), true_gamma(x));
}

const char* censor_relation_name(CensorRelation r) noexcept {
    switch (r) {
        case CensorRelation::lighter: return "lighter";
        case CensorRelation::equal: return "equal";
        case CensorRelation::heavier: return "heavier";
    }
    return "?";
}

ScenarioSpec ScenarioSpec::make(CensorRelation relation) {
    switch (relation) {
        case CensorRelation::lighter: return {relation, 1.5};
        case CensorRelation::equal: return {relation, 1.0};
        case CensorRelation::heavier: return {relation, 2.0 / 3.0};
    }
    return {relation, 1.0};
}

ScenarioSpec ScenarioSpec::with_ratio(CensorRelation relation, double ratio) {
    if (!(ratio > 0.0)) throw config_error("censor ratio must be positive");
    const bool consistent = (relation == CensorRelation::lighter && ratio > 1.0) ||
                            (relation == CensorRelation::equal && ratio == 1.0) ||
                            (relation == CensorRelation::heavier && ratio < 1.0);
    if (!consistent) {
        throw config_error("censor ratio inconsistent with the scenario relation");
    }
    return {relation, ratio};
}

double ScenarioSpec::gamma_z(double x) const {
    return std::min(gamma_y(x), gamma_c(x));
}

GeneratedSample gen_sample(std::size_t n, const ScenarioSpec& scenario,
                           std::uint64_t seed, std::uint64_t rep) {
    ReplicationRng rng(seed, rep);
    std::vector<Observation> obs(n);
    std::vector<double> y_true(n);
    std::vector<double> c_true(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform01();
        const double u = rng.uniform01();
        const double v = rng.uniform01();
        const double y = std::pow(-std::log(u), scenario.gamma_y(x));
        const double c = std::pow(-std::log(v), scenario.gamma_c(x));
        obs[i].x = x;
        obs[i].z = std::min(y, c);
        obs[i].uncensored = y <= c;
        y_true[i] = y;
        c_true[i] = c;
    }
    return GeneratedSample{CensoredSample(std::move(obs)), std::move(y_true),
                           std::move(c_true)};
}

std::pair<double, double> error_metrics(const std::vector<double>& estimates,
                                        double truth) {
    if (estimates.empty()) throw empty_input("error_metrics needs estimates");
    double se = 0.0, ae = 0.0;
    for (double e : estimates) {
        const double d = e - truth;
        se += d * d;
        ae += std::abs(d);
    }
    const double n = static_cast<double>(estimates.size());
    return {se / n, ae / n};
}

namespace {

constexpr std::size_t kNumEstimators = 6;
const char* const kEstimatorNames[kNumEstimators] = {
    "gamma_complete_y",    "gamma_complete_z",    "gamma_censored",
    "quantile_complete_y", "quantile_complete_z", "quantile_censored",
};

struct RepResult {
    // [x index][estimator index]; NaN marks a failed estimate
    std::vector<double> values;
};

void run_one_rep(const McConfig& cfg, const ScenarioSpec& scenario, std::size_t rep,
                 RepResult& out) {
    const std::size_t nx = cfg.x_grid.size();
    out.values.assign(nx * kNumEstimators,
                      std::numeric_limits<double>::quiet_NaN());

    const GeneratedSample gen =
        gen_sample(cfg.n, scenario, cfg.seed, static_cast<std::uint64_t>(rep));

    // complete-data comparison sample: the latent lifetimes, all events
    std::vector<Observation> yobs(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        yobs[i] = Observation{gen.sample[i].x, gen.y_true[i], true};
    }
    const CensoredSample y_sample(std::move(yobs));

    Bandwidth h{cfg.fixed_h};
    if (cfg.auto_tune || !(cfg.fixed_h > 0.0)) {
        h = cv_bandwidth(gen.sample, BandwidthGrid::default_for(gen.sample),
                         cfg.kernel);
    }

    for (std::size_t xi = 0; xi < nx; ++xi) {
        const double x = cfg.x_grid[xi];

        std::optional<GammaProfile> censored_profile;
        try {
            censored_profile.emplace(gen.sample, x, h, cfg.kernel,
                                     TailVariant::censored, cfg.hazard_variant);
        } catch (const error&) {
            continue;  // nothing estimable at this x
        }

        std::size_t k = cfg.fixed_k;
        if (cfg.auto_tune) {
            k = select_k(censored_profile->gammas()).chosen_k;
        }

        const auto estimate = [&](const GammaProfile& profile, std::size_t gamma_slot,
                                  std::size_t quantile_slot) {
            try {
                const TailEstimate est = profile.gamma_at(k);
                out.values[xi * kNumEstimators + gamma_slot] = est.gamma_hat;
                const QuantileEstimate q = weissman_quantile(
                    cfg.survival_level, est, profile.hazard_at_threshold(k));
                out.values[xi * kNumEstimators + quantile_slot] = q.q_hat;
            } catch (const error&) {
                // failed replications are data, not errors
            }
        };

        try {
            const GammaProfile py(y_sample, x, h, cfg.kernel,
                                  TailVariant::complete_hazard, cfg.hazard_variant);
            estimate(py, 0, 3);
        } catch (const error&) {
        }
        try {
            const GammaProfile pz(gen.sample, x, h, cfg.kernel,
                                  TailVariant::complete_hazard, cfg.hazard_variant);
            estimate(pz, 1, 4);
        } catch (const error&) {
        }
        estimate(*censored_profile, 2, 5);
    }
}

}  // namespace

const McCell* McReport::find(double x, const std::string& estimator) const {
    for (const auto& cell : cells) {
        if (cell.estimator == estimator && std::abs(cell.x - x) < 1e-12) {
            return &cell;
        }
    }
    return nullptr;
}

McReport run_monte_carlo(const McConfig& config, const ScenarioSpec& scenario) {
    if (config.n < 10) throw config_error("n must be at least 10");
    if (config.reps < 1) throw config_error("reps must be at least 1");
    if (config.x_grid.empty()) throw config_error("x grid must not be empty");
    if (!(config.survival_level > 0.0) || !(config.survival_level < 1.0)) {
        throw config_error("survival level must lie strictly between 0 and 1");
    }
    if (!config.auto_tune && config.fixed_k < 2) {
        throw config_error("fixed k must be at least 2");
    }

    std::vector<RepResult> results(config.reps);
    std::atomic<std::size_t> next{0};
    unsigned thread_count = config.threads != 0
                                ? config.threads
                                : std::max(1u, std::thread::hardware_concurrency());
    thread_count = static_cast<unsigned>(
        std::min<std::size_t>(thread_count, config.reps));

    const auto worker = [&]() {
        for (;;) {
            const std::size_t rep = next.fetch_add(1);
            if (rep >= config.reps) return;
            run_one_rep(config, scenario, rep, results[rep]);
        }
    };
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    McReport report;
    report.config = config;
    report.scenario = scenario;
    report.rng_identity = ReplicationRng::identity();

    // aggregation in replication-index order for determinism
    for (std::size_t xi = 0; xi < config.x_grid.size(); ++xi) {
        const double x = config.x_grid[xi];
        for (std::size_t e = 0; e < kNumEstimators; ++e) {
            std::vector<double> vals;
            vals.reserve(config.reps);
            for (std::size_t rep = 0; rep < config.reps; ++rep) {
                const double v = results[rep].values[xi * kNumEstimators + e];
                if (!std::isnan(v)) vals.push_back(v);
            }
            McCell cell;
            cell.x = x;
            cell.estimator = kEstimatorNames[e];
            cell.truth = e < 3 ? true_gamma(x)
                               : true_quantile(config.survival_level, x);
            cell.reps_used = vals.size();
            cell.reps_failed = config.reps - vals.size();
            if (!vals.empty()) {
                const auto [mse, mae] = error_metrics(vals, cell.truth);
                cell.mse = mse;
                cell.mae = mae;
                double sum = 0.0;
                for (double v : vals) sum += v;
                cell.mean = sum / static_cast<double>(vals.size());
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_report_csv(const McReport& report, std::ostream& out) {
    out << "scenario,n,x,estimator,truth,mse,mae,mean,reps_used,reps_failed\n";
    for (const auto& c : report.cells) {
        out << censor_relation_name(report.scenario.relation) << ','
            << report.config.n << ',' << fmt_double(c.x) << ',' << c.estimator << ','
            << fmt_double(c.truth) << ',' << fmt_double(c.mse) << ','
            << fmt_double(c.mae) << ',' << fmt_double(c.mean) << ',' << c.reps_used
            << ',' << c.reps_failed << '\n';
    }
}

void write_report_json(const McReport& report, std::ostream& out) {
    nlohmann::json j;
    j["config"] = {
        {"n", report.config.n},
        {"reps", report.config.reps},
        {"seed", report.config.seed},
        {"x_grid", report.config.x_grid},
        {"survival_level", report.config.survival_level},
        {"kernel", report.config.kernel.name()},
        {"hazard_variant", report.config.hazard_variant == HazardVariant::neg_log_km
                               ? "neg-log-km"
                               : "nelson-aalen"},
        {"auto_tune", report.config.auto_tune},
        {"fixed_h", report.config.fixed_h},
        {"fixed_k", report.config.fixed_k},
    };
    j["scenario"] = {
        {"relation", censor_relation_name(report.scenario.relation)},
        {"censor_ratio", report.scenario.censor_ratio},
    };
    j["rng"] = report.rng_identity;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : report.cells) {
        cells.push_back({
            {"x", c.x},
            {"estimator", c.estimator},
            {"truth", c.truth},
            {"mse", c.mse},
            {"mae", c.mae},
            {"mean", c.mean},
            {"reps_used", c.reps_used},
            {"reps_failed", c.reps_failed},
        });
    }
    j["cells"] = std::move(cells);
    out << j.dump(2) << '\n';
}

}  // namespace wtail
