#include "wtail/survival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wtail/errors.hpp"

namespace wtail {

namespace {

double step_value_at(const std::vector<double>& jumps,
                     const std::vector<double>& values, double y,
                     double before_first) {
    auto it = std::upper_bound(jumps.begin(), jumps.end(), y);
    if (it == jumps.begin()) return before_first;
    return values[static_cast<std::size_t>(it - jumps.begin()) - 1];
}

struct JumpGroup {
    double z;
    double mass;        // total weight at z
    double event_mass;  // uncensored weight at z
};

// Unique weighted jump times in ascending z, with per-group masses.
std::vector<JumpGroup> group_jumps(const std::vector<double>& z,
                                   const std::vector<bool>& uncensored,
                                   const std::vector<double>& weights) {
    std::vector<std::size_t> idx;
    idx.reserve(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (weights[i] > 0.0) idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (z[a] != z[b]) return z[a] < z[b];
        return uncensored[a] && !uncensored[b];
    });
    std::vector<JumpGroup> groups;
    for (std::size_t p = 0; p < idx.size();) {
        const double s = z[idx[p]];
        JumpGroup g{s, 0.0, 0.0};
        for (; p < idx.size() && z[idx[p]] == s; ++p) {
            g.mass += weights[idx[p]];
            if (uncensored[idx[p]]) g.event_mass += weights[idx[p]];
        }
        groups.push_back(g);
    }
    return groups;
}

struct ProductLimit {
    std::vector<double> jump_times;
    std::vector<double> survival;      // running product after each jump
    std::vector<double> nelson_aalen;  // running hazard sum after each jump
};

// Core product-limit walk. The risk mass 1 - Hn(s-) is accumulated from the
// right so that at the final jump it equals that group's own mass exactly;
// an all-uncensored final group then yields survival 0 (hazard +inf) rather
// than a rounding leftover.
ProductLimit product_limit(const std::vector<double>& z,
                           const std::vector<bool>& uncensored,
                           const std::vector<double>& weights) {
    const std::vector<JumpGroup> groups = group_jumps(z, uncensored, weights);
    std::vector<double> risk(groups.size());
    double acc = 0.0;
    for (std::size_t g = groups.size(); g-- > 0;) {
        acc += groups[g].mass;
        risk[g] = acc;
    }
    ProductLimit out;
    out.jump_times.reserve(groups.size());
    out.survival.reserve(groups.size());
    out.nelson_aalen.reserve(groups.size());
    double surv = 1.0;
    double na = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double frac = groups[g].event_mass / risk[g];
        na += frac;
        surv *= (1.0 - frac);
        if (surv < 0.0) surv = 0.0;
        out.jump_times.push_back(groups[g].z);
        out.survival.push_back(surv);
        out.nelson_aalen.push_back(na);
    }
    return out;
}

std::vector<double> neg_log_survival(const std::vector<double>& survival) {
    std::vector<double> v(survival.size());
    for (std::size_t i = 0; i < survival.size(); ++i) {
        v[i] = survival[i] > 0.0 ? -std::log(survival[i])
                                 : std::numeric_limits<double>::infinity();
    }
    return v;
}

}  // namespace

HazardCurve::HazardCurve(std::vector<double> jump_times, std::vector<double> cumulative,
                         HazardVariant variant)
    : jump_times_(std::move(jump_times)), cum_(std::move(cumulative)), variant_(variant) {}

double HazardCurve::value_at(double y) const {
    return step_value_at(jump_times_, cum_, y, 0.0);
}

bool HazardCurve::has_infinite_terminal() const noexcept {
    return !cum_.empty() && std::isinf(cum_.back());
}

SurvivalCurve::SurvivalCurve(std::vector<double> jump_times, std::vector<double> survival)
    : jump_times_(std::move(jump_times)), surv_(std::move(survival)) {}

double SurvivalCurve::value_at(double y) const {
    return step_value_at(jump_times_, surv_, y, 1.0);
}

double SubDistributions::Hn_at(double s) const {
    return step_value_at(jump_times, Hn_after, s, 0.0);
}

double SubDistributions::H1n_at(double s) const {
    return step_value_at(jump_times, H1n_after, s, 0.0);
}

SubDistributions sub_distributions(const CensoredSample& sample, double x,
                                   Bandwidth h, KernelSpec kernel) {
    const std::vector<double> w = nw_weights(x, sample, h, kernel);
    std::vector<double> z(sample.size());
    std::vector<bool> unc(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        z[i] = sample[i].z;
        unc[i] = sample[i].uncensored;
    }
    const auto groups = group_jumps(z, unc, w);
    SubDistributions out;
    double hn = 0.0, h1n = 0.0;
    for (const auto& g : groups) {
        hn += g.mass;
        h1n += g.event_mass;
        out.jump_times.push_back(g.z);
        out.Hn_after.push_back(hn);
        out.H1n_after.push_back(h1n);
    }
    return out;
}

namespace detail {

HazardCurve cum_hazard_from_weights(const std::vector<double>& z,
                                    const std::vector<bool>& uncensored,
                                    const std::vector<double>& weights,
                                    HazardVariant variant) {
    ProductLimit pl = product_limit(z, uncensored, weights);
    if (variant == HazardVariant::nelson_aalen) {
        return HazardCurve(std::move(pl.jump_times), std::move(pl.nelson_aalen),
                           variant);
    }
    return HazardCurve(std::move(pl.jump_times), neg_log_survival(pl.survival),
                       variant);
}

SurvivalCurve km_survival_from_weights(const std::vector<double>& z,
                                       const std::vector<bool>& uncensored,
                                       const std::vector<double>& weights) {
    ProductLimit pl = product_limit(z, uncensored, weights);
    return SurvivalCurve(std::move(pl.jump_times), std::move(pl.survival));
}

}  // namespace detail

namespace {

HazardCurve build_conditional(const CensoredSample& sample, double x, Bandwidth h,
                              KernelSpec kernel, HazardVariant variant) {
    const std::vector<double> w = nw_weights(x, sample, h, kernel);
    std::vector<double> z(sample.size());
    std::vector<bool> unc(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        z[i] = sample[i].z;
        unc[i] = sample[i].uncensored;
    }
    return detail::cum_hazard_from_weights(z, unc, w, variant);
}

}  // namespace

HazardCurve conditional_cum_hazard(const CensoredSample& sample, double x,
                                   Bandwidth h, KernelSpec kernel,
                                   HazardVariant variant) {
    return build_conditional(sample, x, h, kernel, variant);
}

SurvivalCurve conditional_km_survival(const CensoredSample& sample, double x,
                                      Bandwidth h, KernelSpec kernel) {
    const std::vector<double> w = nw_weights(x, sample, h, kernel);
    std::vector<double> z(sample.size());
    std::vector<bool> unc(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        z[i] = sample[i].z;
        unc[i] = sample[i].uncensored;
    }
    return detail::km_survival_from_weights(z, unc, w);
}

}  // namespace wtail
