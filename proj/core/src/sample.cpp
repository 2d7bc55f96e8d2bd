#include "wtail/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wtail/errors.hpp"

namespace wtail {

CensoredSample::CensoredSample(std::vector<Observation> observations)
    : obs_(std::move(observations)) {
    if (obs_.empty()) {
        throw empty_input("CensoredSample requires at least one observation");
    }
    for (std::size_t i = 0; i < obs_.size(); ++i) {
        if (!(obs_[i].z > 0.0) || !std::isfinite(obs_[i].z)) {
            throw non_positive_data("observation " + std::to_string(i + 1) +
                                    ": z must be a positive finite real");
        }
        if (!std::isfinite(obs_[i].x)) {
            throw non_positive_data("observation " + std::to_string(i + 1) +
                                    ": covariate must be finite");
        }
        if (obs_[i].uncensored) ++n_uncensored_;
    }
    z_order_.resize(obs_.size());
    std::iota(z_order_.begin(), z_order_.end(), std::size_t{0});
    std::stable_sort(z_order_.begin(), z_order_.end(),
                     [this](std::size_t a, std::size_t b) {
                         if (obs_[a].z != obs_[b].z) return obs_[a].z < obs_[b].z;
                         return obs_[a].uncensored && !obs_[b].uncensored;
                     });
}

}  // namespace wtail
