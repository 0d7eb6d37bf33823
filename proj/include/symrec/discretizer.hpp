#pragma once

#include "symrec/signature.hpp"

#include <array>
#include <span>
#include <vector>

namespace symrec {

struct ColumnDiscretization {
    int feature_index = 1;  // 1..21
    std::vector<double> cutpoints;

    int state_count() const { return static_cast<int>(cutpoints.size()) + 1; }
    // Number of cutpoints <= value; a value equal to a cutpoint belongs to the state above it.
    int state_of(double value) const;
    bool operator==(const ColumnDiscretization&) const = default;
};

struct DiscretizationMap {
    std::array<ColumnDiscretization, kSignatureSize> columns;

    std::vector<int> cardinalities() const;
    bool operator==(const DiscretizationMap&) const = default;
};

// Cutpoints for one column: AIC-merged bins, with each cutpoint placed midway
// between the largest sample of a bin and the smallest sample of the next
// non-empty bin.
std::vector<double> fit_cutpoints(std::span<const double> values, std::size_t initial_bins);

DiscretizationMap fit_discretization(std::span<const Signature> signatures, std::size_t initial_bins = 16);

using StateVector = std::array<int, kSignatureSize>;

StateVector discretize(const Signature& sig, const DiscretizationMap& map);

}  // namespace symrec
