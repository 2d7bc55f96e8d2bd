#ifndef WTAIL_TAIL_HPP
#define WTAIL_TAIL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wtail/kernel.hpp"
#include "wtail/sample.hpp"
#include "wtail/survival.hpp"

namespace wtail {

enum class TailVariant {
    uncond,
    /// Rank-based reading of the complete-data estimator: denominator sums
    /// loglog(n_eff/i) - loglog(n_eff/k) over exceedance ranks i.
    complete_literal,
    /// Structural analogue of the censored estimator with every observation
    /// treated as an event. Default complete-data variant.
    complete_hazard,
    /// The censored conditional estimator: hazard log-spacings of the Beran
    /// estimator in the denominator.
    censored,
};

const char* tail_variant_name(TailVariant v) noexcept;

struct TailEstimate {
    double gamma_hat = 0.0;
    std::size_t k = 0;        // requested threshold count
    double y_n = 0.0;         // threshold value
    double h = 0.0;           // bandwidth used (0 for uniform weights)
    TailVariant variant = TailVariant::censored;
    std::size_t n_exceedances = 0;  // observations entering the tail sums
    bool degenerate_tail = false;   // numerator was exactly zero
    /// True when the largest observation was dropped from the sums because
    /// its neg-log-km hazard value is +infinity.
    bool dropped_infinite_terminal = false;
};

struct QuantileEstimate {
    double q_hat = 0.0;
    double survival_level = 0.0;  // p with P(Y > q | x) = p
    double alpha_input = 0.0;
    double y_n = 0.0;
    double hazard_at_yn = 0.0;
    double gamma_used = 0.0;
};

/// Unconditional Weibull-tail estimator from ascending positive data:
///   gamma = sum_{i<=k} [log Z_{n-i+1} - log Z_{n-k+1}]
///         / sum_{i<=k} [loglog(n/i) - loglog(n/k)].
/// Requires 2 <= k < n. A zero numerator (all top-k equal) is returned as
/// gamma_hat = 0 with degenerate_tail set, not as an error.
TailEstimate gamma_unconditional(std::span<const double> z_ascending, std::size_t k);

/// Threshold for a given k: the (k+1)-th largest z among observations with
/// positive kernel weight at x. Exactly k weighted observations lie strictly
/// above it in the tie-free case; boundary ties shrink the exceedance set.
double threshold_from_k(const CensoredSample& sample, double x, Bandwidth h,
                        KernelSpec kernel, std::size_t k);

/// Conditional Weibull-tail estimator at covariate x.
///   censored:        denominator uses hazard log-spacings of the Beran
///                    estimator built from (z, delta);
///   complete_hazard: same expression with delta forced to 1;
///   complete_literal: rank-based denominator (no hazard).
/// Exceedances are the weighted observations strictly above the threshold;
/// an uncensored maximum whose neg-log-km hazard is +infinity is dropped
/// from the sums and recorded in the estimate.
TailEstimate gamma_conditional(const CensoredSample& sample, double x, Bandwidth h,
                               KernelSpec kernel, std::size_t k, TailVariant variant,
                               HazardVariant hazard_variant = HazardVariant::neg_log_km);

/// Same estimator with every observation given unit weight (the degenerate
/// unconditional mode of the CLI); equivalent to a constant kernel with an
/// infinite bandwidth.
TailEstimate gamma_conditional_uniform(const CensoredSample& sample, std::size_t k,
                                       TailVariant variant,
                                       HazardVariant hazard_variant = HazardVariant::neg_log_km);

/// Weissman-type conditional quantile
///   q(p|x) = y_n * [ -log(p) / hazard_at_yn ]^gamma.
/// p is a survival level: the estimate targets P(Y > q | x) = p; both
/// extrapolation directions are permitted.
QuantileEstimate weissman_quantile(double survival_level, const TailEstimate& tail,
                                   double hazard_at_threshold);

/// Shared preparation for evaluating the conditional estimator at many k
/// (weights, hazard curve and the z-descending exceedance ordering are
/// computed once). gamma_at(k) reproduces gamma_conditional(..., k) exactly.
class GammaProfile {
public:
    GammaProfile(const CensoredSample& sample, double x, Bandwidth h,
                 KernelSpec kernel, TailVariant variant,
                 HazardVariant hazard_variant = HazardVariant::neg_log_km);

    /// Explicit per-observation weights (the uniform mode passes all ones);
    /// recorded bandwidth is 0.
    GammaProfile(const CensoredSample& sample, std::vector<double> weights,
                 TailVariant variant,
                 HazardVariant hazard_variant = HazardVariant::neg_log_km);

    /// Largest admissible k (= positive-weight count - 1).
    std::size_t max_k() const noexcept;

    /// Estimate for one k; throws like gamma_conditional.
    TailEstimate gamma_at(std::size_t k) const;

    /// Hazard value at the k-threshold, as used by the Weissman quantile.
    double hazard_at_threshold(std::size_t k) const;

    /// All estimates for k = 1..max_k; entries that raise errors are nullopt.
    std::vector<std::optional<double>> gammas() const;

private:
    void build(const CensoredSample& sample, const std::vector<double>& kernel_vals);

    std::vector<double> z_desc_;       // positive-weight z, descending
    std::vector<double> w_desc_;       // kernel values, same order
    std::vector<double> hazard_desc_;  // hazard at each z, same order
    double h_ = 0.0;
    TailVariant variant_;
    HazardVariant hazard_variant_;
};

}  // namespace wtail

#endif
