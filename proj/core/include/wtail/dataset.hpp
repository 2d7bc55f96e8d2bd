#ifndef WTAIL_DATASET_HPP
#define WTAIL_DATASET_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wtail/sample.hpp"

namespace wtail {

struct DatasetSummary {
    std::size_t n = 0;
    std::size_t n_uncensored = 0;
    std::optional<double> covariate_median;  // missing only for n = 0
    std::optional<double> covariate_sd;      // divisor n-1; missing for n < 2
};

struct LoadedDataset {
    CensoredSample sample;
    DatasetSummary summary;
};

/// Loads a CSV with a header row and required columns time, delta and
/// covariate (any order; unknown columns are ignored; an id column is
/// accepted). delta must be 0 or 1; time must be positive. Malformed rows
/// raise parse_error with the 1-based line number.
LoadedDataset load_csv(const std::string& path);
LoadedDataset load_csv(std::istream& in, const std::string& origin = "<stream>");

/// Writes id,time,delta,covariate with 17 significant digits, enough for an
/// exact double round-trip.
void save_csv(const CensoredSample& sample, std::ostream& out);

DatasetSummary summarize(const CensoredSample& sample);

/// Weibull QQ-plot coordinates (loglog(n/i), log Z_{n-i+1,n}) for i = 1..k.
struct QQPoint {
    double loglog_n_over_i;
    double log_z;
};

std::vector<QQPoint> qq_points(const CensoredSample& sample, std::size_t k_n);

void write_qq_csv(const std::vector<QQPoint>& points, std::ostream& out);

}  // namespace wtail

#endif
