#include "symrec/signature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace symrec {

void validate_scheme(const IntervalScheme& scheme) {
    if (scheme.intervals.empty()) throw std::invalid_argument("interval scheme is empty");
    if (scheme.domain_low > scheme.domain_high) throw std::invalid_argument("inverted scheme domain");
    for (const auto& iv : scheme.intervals)
        if (!(iv.low <= iv.high)) throw std::invalid_argument("interval with low > high");
    if (scheme.intervals.front().low > scheme.domain_low || scheme.intervals.back().high < scheme.domain_high)
        throw std::invalid_argument("intervals do not cover the domain");
    for (std::size_t i = 0; i + 1 < scheme.size(); ++i) {
        if (scheme.intervals[i].high < scheme.intervals[i + 1].low)
            throw std::invalid_argument("gap between consecutive intervals");
        if (scheme.intervals[i].low > scheme.intervals[i + 1].low)
            throw std::invalid_argument("intervals not ordered");
    }
}

std::vector<int> fuzzy_count(std::span<const double> values, const IntervalScheme& scheme) {
    std::vector<int> counts(scheme.size(), 0);
    for (double v : values) {
        const double c = std::clamp(v, scheme.domain_low, scheme.domain_high);
        for (std::size_t i = 0; i < scheme.size(); ++i) {
            if (!scheme.intervals[i].contains(c)) continue;
            // a value on a shared boundary of two touching intervals goes up only
            const bool touching = i + 1 < scheme.size() && scheme.intervals[i + 1].low == scheme.intervals[i].high;
            if (touching && c == scheme.intervals[i].high && scheme.intervals[i].low < c) continue;
            ++counts[i];
        }
    }
    return counts;
}

std::size_t Histogram::total() const {
    std::size_t n = 0;
    for (auto c : counts) n += c;
    return n;
}

Histogram equal_width_histogram(std::span<const double> samples, std::size_t bins) {
    if (samples.empty()) throw std::invalid_argument("histogram of empty sample");
    if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *mn, hi = *mx;
    Histogram h;
    h.edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
    h.edges[bins] = hi;
    h.counts.assign(bins, 0);
    h.sample_bin.reserve(samples.size());
    for (double v : samples) {
        std::size_t b = 0;
        if (width > 0) b = std::min(bins - 1, static_cast<std::size_t>(std::floor((v - lo) / width)));
        ++h.counts[b];
        h.sample_bin.push_back(b);
    }
    return h;
}

double histogram_aic(std::span<const std::size_t> counts, std::span<const double> widths) {
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    double loglik = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        const double n = static_cast<double>(counts[i]);
        loglik += n * std::log(n / (total * widths[i]));
    }
    return -2.0 * loglik + 2.0 * static_cast<double>(counts.size());
}

std::vector<std::size_t> AicBinning::counts() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
        std::size_t c = 0;
        for (std::size_t b = bounds[j]; b < bounds[j + 1]; ++b) c += initial.counts[b];
        out.push_back(c);
    }
    return out;
}

std::vector<double> AicBinning::widths() const {
    std::vector<double> out;
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j)
        out.push_back(initial.edges[bounds[j + 1]] - initial.edges[bounds[j]]);
    return out;
}

double AicBinning::aic() const {
    const auto c = counts();
    const auto w = widths();
    return histogram_aic(c, w);
}

IntervalScheme AicBinning::scheme() const {
    IntervalScheme s;
    s.domain_low = initial.edges.front();
    s.domain_high = initial.edges.back();
    if (degenerate) {
        s.intervals = {{s.domain_low, s.domain_low}};
        return s;
    }
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j)
        s.intervals.push_back({initial.edges[bounds[j]], initial.edges[bounds[j + 1]]});
    return s;
}

AicBinning aic_merge(std::span<const double> samples, std::size_t initial_bins) {
    AicBinning result;
    result.initial = equal_width_histogram(samples, initial_bins);
    const auto& edges = result.initial.edges;
    if (edges.front() == edges.back()) {
        result.degenerate = true;
        result.bounds = {0, initial_bins};
        return result;
    }
    result.bounds.resize(initial_bins + 1);
    for (std::size_t i = 0; i <= initial_bins; ++i) result.bounds[i] = i;

    std::vector<std::size_t> counts = result.counts();
    std::vector<double> widths = result.widths();
    double current = histogram_aic(counts, widths);
    while (counts.size() > 1) {
        double best_aic = std::numeric_limits<double>::infinity();
        std::size_t best = 0;
        for (std::size_t j = 0; j + 1 < counts.size(); ++j) {
            std::vector<std::size_t> c = counts;
            std::vector<double> w = widths;
            c[j] += c[j + 1];
            w[j] += w[j + 1];
            c.erase(c.begin() + static_cast<std::ptrdiff_t>(j) + 1);
            w.erase(w.begin() + static_cast<std::ptrdiff_t>(j) + 1);
            const double a = histogram_aic(c, w);
            if (a < best_aic) {
                best_aic = a;
                best = j;
            }
        }
        if (current - best_aic < 0) break;
        counts[best] += counts[best + 1];
        widths[best] += widths[best + 1];
        counts.erase(counts.begin() + static_cast<std::ptrdiff_t>(best) + 1);
        widths.erase(widths.begin() + static_cast<std::ptrdiff_t>(best) + 1);
        result.bounds.erase(result.bounds.begin() + static_cast<std::ptrdiff_t>(best) + 1);
        current = best_aic;
    }
    return result;
}

IntervalScheme aic_bins(std::span<const double> samples, std::size_t initial_bins) {
    return aic_merge(samples, initial_bins).scheme();
}

IntervalScheme fuzzify(const IntervalScheme& scheme, double overlap_ratio) {
    if (overlap_ratio < 0.0 || overlap_ratio >= 0.5) throw std::invalid_argument("overlap_ratio must be in [0, 0.5)");
    IntervalScheme out = scheme;
    for (std::size_t i = 0; i + 1 < scheme.size(); ++i) {
        const double boundary = scheme.intervals[i].high;
        out.intervals[i].high = boundary + overlap_ratio * scheme.intervals[i + 1].width();
        out.intervals[i + 1].low = boundary - overlap_ratio * scheme.intervals[i].width();
    }
    return out;
}

IntervalScheme merge_to_at_most(IntervalScheme scheme, std::vector<std::size_t> counts, std::size_t target) {
    while (scheme.size() > target && scheme.size() > 1) {
        std::size_t best = 0;
        for (std::size_t j = 1; j + 1 < scheme.size(); ++j)
            if (counts[j] + counts[j + 1] < counts[best] + counts[best + 1]) best = j;
        scheme.intervals[best].high = scheme.intervals[best + 1].high;
        counts[best] += counts[best + 1];
        scheme.intervals.erase(scheme.intervals.begin() + static_cast<std::ptrdiff_t>(best) + 1);
        counts.erase(counts.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }
    return scheme;
}

SignatureSchema fit_schema(std::span<const Arg> training, const SchemaConfig& cfg) {
    if (training.empty()) throw std::invalid_argument("fit_schema needs at least one ARG");
    std::vector<double> degrees;
    for (const auto& g : training)
        for (int d : g.degrees()) degrees.push_back(d);

    const AicBinning binning = aic_merge(degrees, cfg.initial_bins);
    IntervalScheme density = binning.degenerate ? binning.scheme()
                                                : merge_to_at_most(binning.scheme(), binning.counts(), 3);
    SignatureSchema schema;
    schema.density_scheme = fuzzify(density, cfg.overlap_ratio);
    schema.length_scheme = cfg.length_scheme;
    schema.angle_scheme = cfg.angle_scheme;
    return schema;
}

Signature compute_signature(const Arg& arg, const SignatureSchema& schema) {
    Signature sig;
    auto& f = sig.features;
    f[0] = static_cast<double>(arg.nodes.size());
    f[1] = static_cast<double>(arg.edges.size());
    std::vector<double> lengths;
    for (const auto& n : arg.nodes) {
        f[n.kind == PrimitiveKind::Vector ? 2 : 3] += 1;
        lengths.push_back(n.relative_length);
    }
    std::vector<double> angles;
    for (const auto& e : arg.edges) {
        f[4 + static_cast<int>(e.connection_type)] += 1;
        angles.push_back(e.relative_angle);
    }

    const std::vector<int> deg = arg.degrees();
    const std::vector<double> deg_values(deg.begin(), deg.end());
    const auto density = fuzzy_count(deg_values, schema.density_scheme);
    for (std::size_t i = 0; i < 3 && i < density.size(); ++i) f[9 + static_cast<int>(i)] = density[i];

    const auto len = fuzzy_count(lengths, schema.length_scheme);
    const auto ang = fuzzy_count(angles, schema.angle_scheme);
    for (int i = 0; i < 3; ++i) {
        f[12 + i] = len.at(static_cast<std::size_t>(i));
        f[15 + i] = ang.at(static_cast<std::size_t>(i));
    }

    f[18] = static_cast<double>(arg.connected_components());
    f[19] = deg.empty() ? 0.0 : *std::max_element(deg.begin(), deg.end());
    f[20] = static_cast<double>(std::count(deg.begin(), deg.end(), 0));
    return sig;
}

std::string signature_csv_header() {
    std::string h;
    for (int i = 1; i <= kSignatureSize; ++i) h += "f" + std::to_string(i) + ",";
    return h + "label";
}

std::string signature_csv_row(const Signature& s, const std::string& label) {
    std::ostringstream out;
    for (int i = 0; i < kSignatureSize; ++i) out << s[i] << ',';
    out << label;
    return out.str();
}

}  // namespace symrec
