#ifndef WTAIL_SAMPLE_HPP
#define WTAIL_SAMPLE_HPP

#include <cstddef>
#include <vector>

namespace wtail {

/// One observed triplet: covariate x, observed time z = min(y, c) and the
/// non-censoring indicator (true means the event was observed, z = y).
struct Observation {
    double x = 0.0;
    double z = 0.0;
    bool uncensored = true;
};

/// Strictly positive bandwidth for kernel smoothing in the covariate.
struct Bandwidth {
    double h;
};

/// An immutable sample of censored observations. Keeps the original order
/// and caches a z-ascending index; ties in z put uncensored observations
/// first (the product-limit tie convention).
class CensoredSample {
public:
    explicit CensoredSample(std::vector<Observation> observations);

    std::size_t size() const noexcept { return obs_.size(); }
    const std::vector<Observation>& observations() const noexcept { return obs_; }
    const Observation& operator[](std::size_t i) const noexcept { return obs_[i]; }

    /// Indices into observations() ordered by ascending z (uncensored first
    /// among ties).
    const std::vector<std::size_t>& z_order() const noexcept { return z_order_; }

    std::size_t n_uncensored() const noexcept { return n_uncensored_; }

private:
    std::vector<Observation> obs_;
    std::vector<std::size_t> z_order_;
    std::size_t n_uncensored_ = 0;
};

}  // namespace wtail

#endif
