#include "symrec/discretizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace symrec {

int ColumnDiscretization::state_of(double value) const {
    return static_cast<int>(std::upper_bound(cutpoints.begin(), cutpoints.end(), value) - cutpoints.begin());
}

std::vector<int> DiscretizationMap::cardinalities() const {
    std::vector<int> out;
    for (const auto& c : columns) out.push_back(c.state_count());
    return out;
}

std::vector<double> fit_cutpoints(std::span<const double> values, std::size_t initial_bins) {
    if (values.empty()) throw std::invalid_argument("cannot discretize an empty column");
    const AicBinning binning = aic_merge(values, initial_bins);
    if (binning.degenerate) return {};

    // initial bin -> final bin
    std::vector<std::size_t> final_of(binning.initial.bins());
    for (std::size_t j = 0; j + 1 < binning.bounds.size(); ++j)
        for (std::size_t b = binning.bounds[j]; b < binning.bounds[j + 1]; ++b) final_of[b] = j;

    const std::size_t k = binning.bins();
    std::vector<double> lo(k, std::numeric_limits<double>::infinity());
    std::vector<double> hi(k, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t j = final_of[binning.initial.sample_bin[i]];
        lo[j] = std::min(lo[j], values[i]);
        hi[j] = std::max(hi[j], values[i]);
    }

    std::vector<double> cuts;
    double prev_high = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < k; ++j) {
        if (lo[j] > hi[j]) continue;  // empty bin
        if (!std::isnan(prev_high)) cuts.push_back(prev_high + (lo[j] - prev_high) / 2.0);
        prev_high = hi[j];
    }
    return cuts;
}

DiscretizationMap fit_discretization(std::span<const Signature> signatures, std::size_t initial_bins) {
    if (signatures.empty()) throw std::invalid_argument("fit_discretization needs signatures");
    DiscretizationMap map;
    std::vector<double> column(signatures.size());
    for (int f = 0; f < kSignatureSize; ++f) {
        for (std::size_t r = 0; r < signatures.size(); ++r) column[r] = signatures[r][f];
        map.columns[static_cast<std::size_t>(f)] = {f + 1, fit_cutpoints(column, initial_bins)};
    }
    return map;
}

StateVector discretize(const Signature& sig, const DiscretizationMap& map) {
    StateVector s{};
    for (int f = 0; f < kSignatureSize; ++f) s[static_cast<std::size_t>(f)] = map.columns[static_cast<std::size_t>(f)].state_of(sig[f]);
    return s;
}

}  // namespace symrec
