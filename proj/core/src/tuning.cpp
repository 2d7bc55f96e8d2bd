#include "wtail/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wtail/errors.hpp"
#include "wtail/survival.hpp"

namespace wtail {

BandwidthGrid BandwidthGrid::default_for(const CensoredSample& sample,
                                         std::size_t count) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& o : sample.observations()) {
        lo = std::min(lo, o.x);
        hi = std::max(hi, o.x);
    }
    double range = hi - lo;
    if (!(range > 0.0)) range = 1.0;  // constant covariate: any h works
    const double h_min = range / 20.0;
    const double h_max = range / 2.0;
    BandwidthGrid grid;
    grid.candidates.resize(count);
    if (count == 1) {
        grid.candidates[0] = h_max;
        return grid;
    }
    const double step = std::log(h_max / h_min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        grid.candidates[i] = h_min * std::exp(step * static_cast<double>(i));
    }
    return grid;
}

double cv_criterion(const CensoredSample& sample, Bandwidth h, KernelSpec kernel) {
    const std::size_t n = sample.size();
    std::vector<double> z(n);
    std::vector<bool> unc(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = sample[i].z;
        unc[i] = sample[i].uncensored;
    }
    // evaluation points sorted once; survival curves are queried in z-order
    std::vector<std::size_t> eval_order(n);
    for (std::size_t j = 0; j < n; ++j) eval_order[j] = j;
    std::sort(eval_order.begin(), eval_order.end(),
              [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });

    double total = 0.0;
    std::vector<double> loo_z(n - 1);
    std::vector<bool> loo_unc(n - 1);
    std::vector<double> loo_w(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = sample[i].x;
        double wsum = 0.0;
        std::size_t p = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = eval_kernel(kernel, (xi - sample[j].x) / h.h);
            loo_z[p] = z[j];
            loo_unc[p] = unc[j];
            loo_w[p] = w;
            wsum += w;
            ++p;
        }
        if (wsum > 0.0) {
            const SurvivalCurve curve =
                detail::km_survival_from_weights(loo_z, loo_unc, loo_w);
            for (std::size_t j = 0; j < n; ++j) {
                const double ind = z[i] > z[j] ? 1.0 : 0.0;
                const double diff = ind - curve.value_at(z[j]);
                total += diff * diff;
            }
        } else {
            // empty leave-one-out neighborhood: survival defaults to 1
            for (std::size_t j = 0; j < n; ++j) {
                const double ind = z[i] > z[j] ? 1.0 : 0.0;
                total += (ind - 1.0) * (ind - 1.0);
            }
        }
    }
    return total;
}

Bandwidth cv_bandwidth(const CensoredSample& sample, const BandwidthGrid& grid,
                       KernelSpec kernel) {
    if (grid.candidates.empty()) {
        throw config_error("bandwidth grid is empty");
    }
    double best_h = grid.candidates.front();
    double best_score = std::numeric_limits<double>::infinity();
    for (double h : grid.candidates) {
        const double score = cv_criterion(sample, Bandwidth{h}, kernel);
        // strict improvement only: ties keep the smallest h
        if (score < best_score) {
            best_score = score;
            best_h = h;
        }
    }
    return Bandwidth{best_h};
}

namespace {

// sample standard deviation (divisor count-1) of the present entries
std::optional<double> block_sd(const std::vector<std::optional<double>>& per_k,
                               std::size_t first_k, std::size_t last_k) {
    double sum = 0.0;
    std::size_t cnt = 0;
    for (std::size_t k = first_k; k <= last_k; ++k) {
        if (per_k[k - 1]) {
            sum += *per_k[k - 1];
            ++cnt;
        }
    }
    if (cnt < 2) return std::nullopt;
    const double mean = sum / static_cast<double>(cnt);
    double ss = 0.0;
    for (std::size_t k = first_k; k <= last_k; ++k) {
        if (per_k[k - 1]) {
            const double d = *per_k[k - 1] - mean;
            ss += d * d;
        }
    }
    return std::sqrt(ss / static_cast<double>(cnt - 1));
}

std::size_t lower_middle(std::size_t first_k, std::size_t last_k) {
    const std::size_t count = last_k - first_k + 1;
    return first_k + (count + 1) / 2 - 1;
}

}  // namespace

KSelectionTrace select_k(const std::vector<std::optional<double>>& per_k_estimates) {
    const std::size_t K = per_k_estimates.size();
    if (K == 0) throw config_error("select_k needs at least one estimate slot");

    KSelectionTrace trace;
    trace.per_k = per_k_estimates;

    for (std::size_t first = 1; first <= K; first += 10) {
        const std::size_t last = std::min(first + 9, K);
        KSelectionTrace::Block b;
        b.first_k = first;
        b.last_k = last;
        b.sd = block_sd(per_k_estimates, first, last);
        const std::size_t span = last - first + 1;
        std::size_t missing = 0;
        for (std::size_t k = first; k <= last; ++k) {
            if (!per_k_estimates[k - 1]) ++missing;
        }
        // complete 10-blocks compete, unless K < 10 (single partial block);
        // more than half missing disqualifies
        const bool complete = span == 10 || (first == 1 && last == K);
        b.eligible = complete && missing * 2 <= span && b.sd.has_value();
        trace.blocks.push_back(b);
    }

    const KSelectionTrace::Block* winner = nullptr;
    for (const auto& b : trace.blocks) {
        if (!b.eligible) continue;
        if (winner == nullptr || *b.sd < *winner->sd) winner = &b;  // earliest wins ties
    }
    if (winner == nullptr) {
        // fall back to the earliest block holding any estimate, else block 1
        for (const auto& b : trace.blocks) {
            bool any = false;
            for (std::size_t k = b.first_k; k <= b.last_k; ++k) {
                if (per_k_estimates[k - 1]) any = true;
            }
            if (any) {
                winner = &b;
                break;
            }
        }
        if (winner == nullptr) winner = &trace.blocks.front();
    }
    trace.chosen_k = lower_middle(winner->first_k, winner->last_k);
    return trace;
}

KSelectionTrace select_k(const std::vector<double>& per_k_estimates) {
    std::vector<std::optional<double>> wrapped(per_k_estimates.size());
    for (std::size_t i = 0; i < per_k_estimates.size(); ++i) {
        wrapped[i] = per_k_estimates[i];
    }
    return select_k(wrapped);
}

KSelectionTrace select_k_for(const CensoredSample& sample, double x, Bandwidth h,
                             KernelSpec kernel, HazardVariant hazard_variant) {
    const GammaProfile profile(sample, x, h, kernel, TailVariant::censored,
                               hazard_variant);
    return select_k(profile.gammas());
}

}  // namespace wtail
