#ifndef WTAIL_MONTECARLO_HPP
#define WTAIL_MONTECARLO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wtail/kernel.hpp"
#include "wtail/sample.hpp"
#include "wtail/survival.hpp"

namespace wtail {

/// The simulated conditional Weibull-tail coefficient
///   gamma_Y(x) = 0.5 (0.1 + sin(pi x)) (1.1 - 0.5 exp(-64 (x - 0.5)^2)).
double true_gamma(double x);

/// Closed-form conditional quantile of the simulated law at survival level p:
///   q = (-log p)^{gamma_Y(x)}.
double true_quantile(double survival_level, double x);

enum class CensorRelation { lighter, equal, heavier };

const char* censor_relation_name(CensorRelation r) noexcept;

/// Censoring scenario: gamma_C(x) = censor_ratio * gamma_Y(x). The default
/// ratios 1.5 / 1 / (2/3) realize gamma_Y < gamma_C, equality, and
/// gamma_Y > gamma_C pointwise.
struct ScenarioSpec {
    CensorRelation relation = CensorRelation::lighter;
    double censor_ratio = 1.5;

    static ScenarioSpec make(CensorRelation relation);
    static ScenarioSpec with_ratio(CensorRelation relation, double ratio);

    double gamma_y(double x) const { return true_gamma(x); }
    double gamma_c(double x) const { return censor_ratio * true_gamma(x); }
    double gamma_z(double x) const;  // min(gamma_y, gamma_c)
};

/// A generated sample plus the latent lifetimes and censoring times, kept
/// for the complete-data comparison estimator.
struct GeneratedSample {
    CensoredSample sample;
    std::vector<double> y_true;
    std::vector<double> c_true;
};

/// Deterministic generation for replication `rep` of a run seeded with
/// `seed`: X ~ U(0,1), Y = (-log U)^{gamma_Y(X)}, C = (-log V)^{gamma_C(X)}.
/// See rng.hpp for the documented stream derivation.
GeneratedSample gen_sample(std::size_t n, const ScenarioSpec& scenario,
                           std::uint64_t seed, std::uint64_t rep = 0);

struct McConfig {
    std::size_t n = 500;
    std::size_t reps = 100;
    std::uint64_t seed = 0;
    std::vector<double> x_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    double survival_level = 1.0 - 1.0 / 1000.0;
    KernelSpec kernel;
    HazardVariant hazard_variant = HazardVariant::neg_log_km;
    /// Tuning: auto_tune selects h once per replication by cross-validation
    /// and k per (replication, x) by the block rule; otherwise fixed_h /
    /// fixed_k are used as given. fixed_h <= 0 with auto_tune = false means
    /// "h by CV once per replication, k fixed".
    bool auto_tune = false;
    double fixed_h = 0.3;
    std::size_t fixed_k = 50;
    unsigned threads = 0;  // 0 = hardware concurrency
};

/// One (x, estimator) aggregation cell.
struct McCell {
    double x = 0.0;
    std::string estimator;  // gamma_complete_y, gamma_complete_z, gamma_censored,
                            // quantile_complete_y, quantile_complete_z, quantile_censored
    double truth = 0.0;
    double mse = 0.0;
    double mae = 0.0;
    double mean = 0.0;
    std::size_t reps_used = 0;
    std::size_t reps_failed = 0;
};

struct McReport {
    McConfig config;
    ScenarioSpec scenario;
    std::string rng_identity;
    std::vector<McCell> cells;

    const McCell* find(double x, const std::string& estimator) const;
};

/// Empirical mean squared error and mean absolute error against a known
/// truth. Throws empty_input on an empty sequence.
std::pair<double, double> error_metrics(const std::vector<double>& estimates,
                                        double truth);

/// Runs the replication farm. Replications execute in parallel; aggregation
/// is performed in replication-index order, so the report is bitwise
/// identical for any thread count. Replications whose estimation throws are
/// counted per cell and excluded.
McReport run_monte_carlo(const McConfig& config, const ScenarioSpec& scenario);

/// Deterministic serializations (no timestamps; fixed ordering and the
/// shortest round-trip representation for doubles).
void write_report_csv(const McReport& report, std::ostream& out);
void write_report_json(const McReport& report, std::ostream& out);

}  // namespace wtail

#endif
