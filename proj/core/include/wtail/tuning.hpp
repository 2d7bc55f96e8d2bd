#ifndef WTAIL_TUNING_HPP
#define WTAIL_TUNING_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "wtail/kernel.hpp"
#include "wtail/sample.hpp"
#include "wtail/tail.hpp"

namespace wtail {

struct BandwidthGrid {
    std::vector<double> candidates;  // strictly increasing, positive

    /// 20 geometrically spaced candidates from range/20 to range/2, where
    /// range is the covariate spread of the sample.
    static BandwidthGrid default_for(const CensoredSample& sample, std::size_t count = 20);
};

/// Leave-one-out cross-validation for the bandwidth:
///   argmin_h sum_i sum_j ( 1{Z_i > Z_j} - Fbar_{n,-i}(Z_j | x_i) )^2
/// with Fbar_{n,-i} the kernel conditional Kaplan-Meier estimator built
/// without observation i. Pairs whose leave-one-out neighborhood at x_i is
/// empty contribute (1{Z_i > Z_j} - 1)^2. Ties break to the smallest h.
Bandwidth cv_bandwidth(const CensoredSample& sample, const BandwidthGrid& grid,
                       KernelSpec kernel);

/// The criterion value for one candidate (exposed for tests).
double cv_criterion(const CensoredSample& sample, Bandwidth h, KernelSpec kernel);

struct KSelectionTrace {
    std::vector<std::optional<double>> per_k;  // per_k[k-1] = gamma at k
    struct Block {
        std::size_t first_k;
        std::size_t last_k;
        std::optional<double> sd;  // nullopt when fewer than 2 usable entries
        bool eligible;
    };
    std::vector<Block> blocks;
    std::size_t chosen_k = 0;
};

/// Threshold-count selection: split k = 1..K into consecutive blocks of 10,
/// compute the sample standard deviation of the estimates in each block, and
/// take the lower middle k of the block with minimal sd. Only complete
/// 10-blocks compete unless K < 10 (then the single partial block is used);
/// blocks with more than half their entries missing are disqualified.
/// Earliest block wins ties.
KSelectionTrace select_k(const std::vector<std::optional<double>>& per_k_estimates);

/// Convenience overload for fully populated estimate sequences.
KSelectionTrace select_k(const std::vector<double>& per_k_estimates);

/// Per-x threshold selection for a sample: builds the censored-estimator
/// profile for k = 1..max_k and applies select_k.
KSelectionTrace select_k_for(const CensoredSample& sample, double x, Bandwidth h,
                             KernelSpec kernel,
                             HazardVariant hazard_variant = HazardVariant::neg_log_km);

}  // namespace wtail

#endif
