#pragma once

#include "symrec/arg.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace symrec {

inline constexpr int kSignatureSize = 21;
inline constexpr const char* kSignatureLayout = "sig21-v1";

struct Interval {
    double low = 0.0;
    double high = 0.0;

    bool contains(double v) const { return low <= v && v <= high; }
    double width() const { return high - low; }
    bool operator==(const Interval&) const = default;
};

// Ordered intervals covering [domain_low, domain_high]; neighbours may overlap.
struct IntervalScheme {
    std::vector<Interval> intervals;
    double domain_low = 0.0;
    double domain_high = 0.0;

    std::size_t size() const { return intervals.size(); }
    bool operator==(const IntervalScheme&) const = default;
};

// Throws std::invalid_argument if ordering, coverage or overlap invariants fail.
void validate_scheme(const IntervalScheme& scheme);

// Per-interval counts; a value inside an overlap increments every interval
// containing it. Where two intervals merely touch, the shared boundary value
// belongs to the upper one. Values outside the domain are clamped onto it first.
std::vector<int> fuzzy_count(std::span<const double> values, const IntervalScheme& scheme);

// Equal-width histogram over [min, max] of the samples.
struct Histogram {
    std::vector<double> edges;        // size bins + 1
    std::vector<std::size_t> counts;  // size bins
    std::vector<std::size_t> sample_bin;

    std::size_t bins() const { return counts.size(); }
    std::size_t total() const;
};

Histogram equal_width_histogram(std::span<const double> samples, std::size_t bins);

// -2 * sum_{n_i > 0} n_i ln(n_i / (N w_i)) + 2k.
double histogram_aic(std::span<const std::size_t> counts, std::span<const double> widths);

// Result of greedy adjacent-bin merging. Final bin j covers initial bins
// [bounds[j], bounds[j + 1]).
struct AicBinning {
    Histogram initial;
    std::vector<std::size_t> bounds;
    bool degenerate = false;  // fewer than two distinct samples

    std::size_t bins() const { return bounds.empty() ? 0 : bounds.size() - 1; }
    std::vector<std::size_t> counts() const;
    std::vector<double> widths() const;
    double aic() const;
    IntervalScheme scheme() const;
};

AicBinning aic_merge(std::span<const double> samples, std::size_t initial_bins);

// Non-overlapping scheme found by greedy AIC merging.
IntervalScheme aic_bins(std::span<const double> samples, std::size_t initial_bins);

// Widens every interior boundary by overlap_ratio of the neighbouring bin width.
IntervalScheme fuzzify(const IntervalScheme& scheme, double overlap_ratio);

struct SchemaConfig {
    std::size_t initial_bins = 16;
    double overlap_ratio = 0.1;
    IntervalScheme length_scheme{{{0.0, 0.45}, {0.3, 0.75}, {0.6, 1.0}}, 0.0, 1.0};
    IntervalScheme angle_scheme{{{0.0, 40.0}, {25.0, 70.0}, {55.0, 90.0}}, 0.0, 90.0};
};

struct SignatureSchema {
    IntervalScheme density_scheme;
    IntervalScheme length_scheme;
    IntervalScheme angle_scheme;
};

// Merges the adjacent pair with the smallest combined count until at most
// `target` bins remain. Input is a non-overlapping scheme with per-bin counts.
IntervalScheme merge_to_at_most(IntervalScheme scheme, std::vector<std::size_t> counts, std::size_t target);

SignatureSchema fit_schema(std::span<const Arg> training, const SchemaConfig& cfg = {});

using FeatureVector = Eigen::Matrix<double, kSignatureSize, 1>;

// f1..f21 are stored at indices 0..20.
struct Signature {
    FeatureVector features = FeatureVector::Zero();

    double operator[](int i) const { return features[i]; }
    double feature(int one_based) const { return features[one_based - 1]; }
    bool operator==(const Signature& o) const { return features == o.features; }
};

Signature compute_signature(const Arg& arg, const SignatureSchema& schema);

std::string signature_csv_header();
std::string signature_csv_row(const Signature& s, const std::string& label);

}  // namespace symrec
