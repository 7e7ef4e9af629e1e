#pragma once

// Small descriptive-statistics helpers for reporting draw batches: stable
// single-pass moments and a fixed-range histogram with explicit under/overflow
// accounting.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ocnid {

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // sample variance (n-1 denominator); 0 for n < 2
    double min = 0.0;
    double max = 0.0;
    double stderr_mean = 0.0;
};

// Welford's single-pass update: the running mean is corrected by the
// compensated increment, so long accumulations do not lose precision the way
// a naive sum-of-squares does.
inline SummaryStats summarize(const std::vector<double>& sample) {
    if (sample.empty()) throw std::invalid_argument("summarize: empty sample");
    SummaryStats s;
    s.n = sample.size();
    s.min = sample.front();
    s.max = sample.front();
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t k = 0;
    for (double x : sample) {
        ++k;
        double delta = x - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (x - mean);
        if (x < s.min) s.min = x;
        if (x > s.max) s.max = x;
    }
    s.mean = mean;
    s.variance = (s.n > 1) ? m2 / static_cast<double>(s.n - 1) : 0.0;
    s.stderr_mean = (s.n > 1) ? std::sqrt(s.variance / static_cast<double>(s.n)) : 0.0;
    return s;
}

struct HistogramBin {
    double left = 0.0;    // left edge of the bin
    std::size_t count = 0;
    double density = 0.0;  // count / (in-range count * bin width)
};

struct Histogram {
    std::vector<HistogramBin> bins;
    std::size_t underflow = 0;  // values below the range
    std::size_t overflow = 0;   // values at or above the upper edge
    double lo = 0.0;
    double hi = 0.0;
};

// Equal-width histogram over [lo, hi). Out-of-range values land in the
// under/overflow counters; densities are normalized over the in-range count,
// so density times bin width sums to exactly 1 whenever anything is in range.
inline Histogram histogram(const std::vector<double>& sample, int bins, double lo, double hi) {
    if (bins < 1) throw std::invalid_argument("histogram: need at least one bin");
    if (!(lo < hi)) throw std::invalid_argument("histogram: lower edge must be below upper edge");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    const double width = (hi - lo) / bins;
    h.bins.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) h.bins[static_cast<std::size_t>(b)].left = lo + b * width;

    std::size_t in_range = 0;
    for (double x : sample) {
        if (!(x >= lo)) {  // also catches NaN
            ++h.underflow;
            continue;
        }
        if (x >= hi) {
            ++h.overflow;
            continue;
        }
        int b = static_cast<int>((x - lo) / width);
        if (b >= bins) b = bins - 1;  // guard the exact-edge rounding case
        ++h.bins[static_cast<std::size_t>(b)].count;
        ++in_range;
    }
    if (in_range > 0) {
        for (auto& bin : h.bins)
            bin.density = static_cast<double>(bin.count) / (static_cast<double>(in_range) * width);
    }
    return h;
}

}  // namespace ocnid
