#include "wtail/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wtail/errors.hpp"

namespace wtail {

const char* tail_variant_name(TailVariant v) noexcept {
    switch (v) {
        case TailVariant::uncond: return "uncond";
        case TailVariant::complete_literal: return "complete-literal";
        case TailVariant::complete_hazard: return "complete-hazard";
        case TailVariant::censored: return "censored";
    }
    return "?";
}

TailEstimate gamma_unconditional(std::span<const double> z_data, std::size_t k) {
    const std::size_t n = z_data.size();
    if (k < 2 || k >= n) {
        throw invalid_k("gamma_unconditional requires 2 <= k < n (k = " +
                        std::to_string(k) + ", n = " + std::to_string(n) + ")");
    }
    std::vector<double> z(z_data.begin(), z_data.end());
    for (double v : z) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw non_positive_data("gamma_unconditional requires positive data");
        }
    }
    std::sort(z.begin(), z.end());

    const double log_anchor = std::log(z[n - k]);  // k-th largest
    double num = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        num += std::log(z[n - i]) - log_anchor;
    }
    const double loglog_anchor = std::log(std::log(static_cast<double>(n) /
                                                   static_cast<double>(k)));
    double den = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        den += std::log(std::log(static_cast<double>(n) / static_cast<double>(i))) -
               loglog_anchor;
    }

    TailEstimate est;
    est.k = k;
    est.y_n = z[n - k];
    est.h = 0.0;
    est.variant = TailVariant::uncond;
    est.n_exceedances = k;
    if (num == 0.0) {
        est.gamma_hat = 0.0;
        est.degenerate_tail = true;
    } else {
        est.gamma_hat = num / den;
    }
    return est;
}

GammaProfile::GammaProfile(const CensoredSample& sample, double x, Bandwidth h,
                           KernelSpec kernel, TailVariant variant,
                           HazardVariant hazard_variant)
    : h_(h.h), variant_(variant), hazard_variant_(hazard_variant) {
    if (variant == TailVariant::uncond) {
        throw config_error("use gamma_unconditional for the unconditional estimator");
    }
    const std::vector<double> kv = kernel_values(x, sample, h, kernel);
    build(sample, kv);
    if (z_desc_.empty()) {
        throw empty_neighborhood("no observation within bandwidth of x = " +
                                 std::to_string(x));
    }
}

GammaProfile::GammaProfile(const CensoredSample& sample, std::vector<double> weights,
                           TailVariant variant, HazardVariant hazard_variant)
    : h_(0.0), variant_(variant), hazard_variant_(hazard_variant) {
    if (variant == TailVariant::uncond) {
        throw config_error("use gamma_unconditional for the unconditional estimator");
    }
    if (weights.size() != sample.size()) {
        throw config_error("weight count does not match sample size");
    }
    build(sample, weights);
    if (z_desc_.empty()) {
        throw empty_neighborhood("all weights are zero");
    }
}

void GammaProfile::build(const CensoredSample& sample,
                         const std::vector<double>& kernel_vals) {
    const std::size_t n = sample.size();
    std::vector<double> z;
    std::vector<bool> unc;
    std::vector<double> w;
    z.reserve(n);
    unc.reserve(n);
    w.reserve(n);
    // complete variants treat every observation as an event
    const bool force_events = variant_ != TailVariant::censored;
    for (std::size_t i = 0; i < n; ++i) {
        if (kernel_vals[i] > 0.0) {
            z.push_back(sample[i].z);
            unc.push_back(force_events || sample[i].uncensored);
            w.push_back(kernel_vals[i]);
        }
    }
    const HazardCurve curve =
        detail::cum_hazard_from_weights(z, unc, w, hazard_variant_);

    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return z[a] > z[b]; });
    z_desc_.resize(z.size());
    w_desc_.resize(z.size());
    hazard_desc_.resize(z.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        z_desc_[p] = z[order[p]];
        w_desc_[p] = w[order[p]];
        hazard_desc_[p] = curve.value_at(z_desc_[p]);
    }
}

std::size_t GammaProfile::max_k() const noexcept {
    return z_desc_.empty() ? 0 : z_desc_.size() - 1;
}

double GammaProfile::hazard_at_threshold(std::size_t k) const {
    if (k + 1 > z_desc_.size()) {
        throw invalid_k("k = " + std::to_string(k) + " exceeds weighted count " +
                        std::to_string(z_desc_.size()) + " - 1");
    }
    return hazard_desc_[k];
}

TailEstimate GammaProfile::gamma_at(std::size_t k) const {
    const std::size_t m = z_desc_.size();
    if (k < 2) throw invalid_k("conditional estimator requires k >= 2");
    if (k + 1 > m) {
        throw invalid_k("k = " + std::to_string(k) +
                        " requires at least k+1 weighted observations (have " +
                        std::to_string(m) + ")");
    }
    const double y_n = z_desc_[k];  // (k+1)-th largest
    const double log_yn = std::log(y_n);

    TailEstimate est;
    est.k = k;
    est.y_n = y_n;
    est.h = h_;
    est.variant = variant_;

    double num = 0.0;
    double den = 0.0;
    std::size_t used = 0;

    if (variant_ == TailVariant::complete_literal) {
        // denominator uses exceedance ranks, not the hazard
        const double n_eff = static_cast<double>(m);
        const double loglog_anchor =
            std::log(std::log(n_eff / static_cast<double>(k)));
        for (std::size_t i = 0; i < k; ++i) {
            if (!(z_desc_[i] > y_n)) continue;  // strict exceedance
            const double rank = static_cast<double>(used + 1);
            num += w_desc_[i] * (std::log(z_desc_[i]) - log_yn);
            den += w_desc_[i] * (std::log(std::log(n_eff / rank)) - loglog_anchor);
            ++used;
        }
        if (used == 0 || !(den > 0.0)) {
            throw zero_denominator("no usable exceedances above threshold " +
                                   std::to_string(y_n));
        }
    } else {
        const double lam_yn = hazard_desc_[k];
        if (!(lam_yn > 0.0)) {
            throw zero_hazard_at_threshold(
                "estimated hazard is zero at threshold " + std::to_string(y_n) +
                " (no uncensored mass at or below it)");
        }
        if (std::isinf(lam_yn)) {
            throw zero_denominator("hazard is already infinite at the threshold");
        }
        const double log_lam_yn = std::log(lam_yn);
        for (std::size_t i = 0; i < k; ++i) {
            if (!(z_desc_[i] > y_n)) continue;  // strict exceedance
            if (std::isinf(hazard_desc_[i])) {
                // uncensored maximum under neg-log-km: excluded from the sums
                est.dropped_infinite_terminal = true;
                continue;
            }
            num += w_desc_[i] * (std::log(z_desc_[i]) - log_yn);
            den += w_desc_[i] * (std::log(hazard_desc_[i]) - log_lam_yn);
            ++used;
        }
        if (used == 0 || !(den > 0.0)) {
            throw zero_denominator(
                "no uncensored mass above threshold " + std::to_string(y_n) +
                ": the tail hazard is flat");
        }
    }

    est.n_exceedances = used;
    if (num == 0.0) {
        est.gamma_hat = 0.0;
        est.degenerate_tail = true;
    } else {
        est.gamma_hat = num / den;
    }
    return est;
}

std::vector<std::optional<double>> GammaProfile::gammas() const {
    std::vector<std::optional<double>> out(max_k());
    for (std::size_t k = 1; k <= max_k(); ++k) {
        try {
            out[k - 1] = gamma_at(k).gamma_hat;
        } catch (const error&) {
            out[k - 1] = std::nullopt;
        }
    }
    return out;
}

double threshold_from_k(const CensoredSample& sample, double x, Bandwidth h,
                        KernelSpec kernel, std::size_t k) {
    const std::vector<double> kv = kernel_values(x, sample, h, kernel);
    std::vector<double> z;
    z.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (kv[i] > 0.0) z.push_back(sample[i].z);
    }
    if (z.empty()) {
        throw empty_neighborhood("no observation within bandwidth of x = " +
                                 std::to_string(x));
    }
    if (k < 1 || k >= z.size()) {
        throw invalid_k("threshold_from_k requires 1 <= k < weighted count (k = " +
                        std::to_string(k) + ", count = " + std::to_string(z.size()) +
                        ")");
    }
    std::nth_element(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(k), z.end(),
                     std::greater<double>());
    return z[k];
}

TailEstimate gamma_conditional(const CensoredSample& sample, double x, Bandwidth h,
                               KernelSpec kernel, std::size_t k, TailVariant variant,
                               HazardVariant hazard_variant) {
    return GammaProfile(sample, x, h, kernel, variant, hazard_variant).gamma_at(k);
}

TailEstimate gamma_conditional_uniform(const CensoredSample& sample, std::size_t k,
                                       TailVariant variant,
                                       HazardVariant hazard_variant) {
    return GammaProfile(sample, std::vector<double>(sample.size(), 1.0), variant,
                        hazard_variant)
        .gamma_at(k);
}

QuantileEstimate weissman_quantile(double survival_level, const TailEstimate& tail,
                                   double hazard_at_threshold) {
    if (!(survival_level > 0.0) || !(survival_level < 1.0)) {
        throw invalid_level("survival level must lie strictly between 0 and 1");
    }
    if (!(hazard_at_threshold > 0.0) || std::isinf(hazard_at_threshold)) {
        throw zero_hazard_at_threshold(
            "Weissman anchoring requires a positive finite hazard at the threshold");
    }
    QuantileEstimate q;
    q.survival_level = survival_level;
    q.alpha_input = survival_level;
    q.y_n = tail.y_n;
    q.hazard_at_yn = hazard_at_threshold;
    q.gamma_used = tail.gamma_hat;
    q.q_hat = tail.y_n *
              std::pow(-std::log(survival_level) / hazard_at_threshold, tail.gamma_hat);
    return q;
}

}  // namespace wtail
