#ifndef WTAIL_SURVIVAL_HPP
#define WTAIL_SURVIVAL_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "wtail/kernel.hpp"
#include "wtail/sample.hpp"

namespace wtail {

enum class HazardVariant {
    /// Cumulative sum of dH1n(s) / (1 - Hn(s-)) over jump points.
    nelson_aalen,
    /// -log of the kernel conditional Kaplan-Meier survival. May end at
    /// +infinity when the largest weighted observation is uncensored.
    neg_log_km,
};

/// Right-continuous nondecreasing step function: value_at(y) is the
/// cumulative value at the largest jump time <= y, zero before the first.
class HazardCurve {
public:
    HazardCurve(std::vector<double> jump_times, std::vector<double> cumulative,
                HazardVariant variant);

    double value_at(double y) const;
    const std::vector<double>& jump_times() const noexcept { return jump_times_; }
    const std::vector<double>& cumulative_values() const noexcept { return cum_; }
    HazardVariant variant() const noexcept { return variant_; }

    /// True when the terminal value is +infinity (neg-log-km with an
    /// uncensored maximum consuming the remaining mass).
    bool has_infinite_terminal() const noexcept;

private:
    std::vector<double> jump_times_;
    std::vector<double> cum_;
    HazardVariant variant_;
};

/// Nonincreasing step survival function with value 1 before the first jump.
class SurvivalCurve {
public:
    SurvivalCurve(std::vector<double> jump_times, std::vector<double> survival);

    double value_at(double y) const;
    const std::vector<double>& jump_times() const noexcept { return jump_times_; }
    const std::vector<double>& values() const noexcept { return surv_; }

private:
    std::vector<double> jump_times_;
    std::vector<double> surv_;
};

/// Weighted sub-distribution step functions
///   Hn(s)  = sum_i B_i(x) 1{Z_i <= s}
///   H1n(s) = sum_i B_i(x) 1{Z_i <= s, uncensored}.
struct SubDistributions {
    std::vector<double> jump_times;
    std::vector<double> Hn_after;   // Hn at each jump (right limit)
    std::vector<double> H1n_after;  // H1n at each jump

    double Hn_at(double s) const;
    double H1n_at(double s) const;
};

SubDistributions sub_distributions(const CensoredSample& sample, double x,
                                   Bandwidth h, KernelSpec kernel);

/// Kernel-weighted Beran estimator of the conditional cumulative hazard.
/// Jumps occur at observed z with positive weight; each uncensored jump
/// contributes dH1n(s) / (1 - Hn(s-)) with the left limit in the
/// denominator. Among tied z, uncensored observations are processed first.
HazardCurve conditional_cum_hazard(const CensoredSample& sample, double x,
                                   Bandwidth h, KernelSpec kernel,
                                   HazardVariant variant);

/// Kernel conditional Kaplan-Meier survival estimator.
SurvivalCurve conditional_km_survival(const CensoredSample& sample, double x,
                                      Bandwidth h, KernelSpec kernel);

namespace detail {

/// Hazard / survival construction from explicit per-observation weights.
/// z and uncensored run parallel to weights; weights need not be normalized
/// (only ratios enter). Used by the tail estimators and the leave-one-out
/// cross-validation loop, which already hold kernel values.
HazardCurve cum_hazard_from_weights(const std::vector<double>& z,
                                    const std::vector<bool>& uncensored,
                                    const std::vector<double>& weights,
                                    HazardVariant variant);

SurvivalCurve km_survival_from_weights(const std::vector<double>& z,
                                       const std::vector<bool>& uncensored,
                                       const std::vector<double>& weights);

}  // namespace detail

}  // namespace wtail

#endif
