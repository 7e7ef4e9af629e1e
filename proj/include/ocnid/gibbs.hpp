#pragma once

// Single-site Gibbs transition for the order-constrained target. One sweep
// updates components in ascending index order; component i is drawn from its
// marginal truncated to (new value of i-1, old value of i+1) by cdf inversion
// against a shared uniform. Because the same uniforms drive every trajectory,
// the sweep is monotone: componentwise-ordered states stay ordered.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ocnid/distribution.hpp"

namespace ocnid {

// Inversion sampler for `d` truncated to [lower, upper]:
//   F^{-1}( F(lower) + (F(upper) - F(lower)) * u ).
// When the mixed probability lands in the upper half, the same draw is
// computed on the survival scale, S^{-1}( S(lower)(1-u) + S(upper)u ): a
// positive combination with no cancellation, so windows deep in a heavy
// upper tail keep full relative accuracy instead of being rounded against 1.
// Both branches are monotone in (lower, upper, u) and agree to rounding
// error at the crossover. The result is clamped into the truncation interval
// so floating-point round-off can never emit a value outside it. A collapsed
// interval (lower == upper) returns the common value, which is what keeps
// coalesced coordinates coalesced; an inverted interval is a caller bug.
inline double truncated_draw(const Distribution& d, double lower, double upper, double u) {
    if (lower > upper)
        throw std::invalid_argument("truncated_draw: lower bound exceeds upper bound");
    if (lower == upper) return lower;
    double flo = d.cdf(lower);
    double fhi = d.cdf(upper);
    double p = flo + (fhi - flo) * u;
    double x;
    if (p <= 0.5) {
        x = d.quantile(p);
    } else {
        double slo = d.survival(lower);
        double shi = d.survival(upper);
        x = d.quantile_upper(slo * (1.0 - u) + shi * u);
    }
    if (x < lower) x = lower;
    if (x > upper) x = upper;
    return x;
}

// One in-place ascending sweep of the order-constrained Gibbs kernel. `x` is
// the current state (strictly the previous state on entry); u has one shared
// uniform per component. Boundary conventions: component 1 is bounded below
// by the support's lower limit, component m above by the support's upper
// limit. Updating in ascending order in place is exactly the kernel: slot
// i-1 already holds its new value and slot i+1 still holds its old one.
inline void gibbs_sweep(const std::vector<Distribution>& dists, std::vector<double>& x,
                        const std::vector<double>& u) {
    const std::size_t m = dists.size();
    if (x.size() != m || u.size() != m)
        throw std::invalid_argument("gibbs_sweep: state/uniform size mismatch");
    const Support s = dists.front().support();
    for (std::size_t i = 0; i < m; ++i) {
        double lo = (i == 0) ? s.lo : x[i - 1];
        double hi = (i + 1 == m) ? s.hi : x[i + 1];
        x[i] = truncated_draw(dists[i], lo, hi, u[i]);
    }
}

// State of the upper trajectory after one sweep from the "all at the upper
// support limit" configuration. With every old neighbor at the limit, the
// sweep reduces to: component i drawn above the new value of i-1 with no
// upper truncation.
inline std::vector<double> upper_start(const std::vector<Distribution>& dists,
                                       const std::vector<double>& u) {
    const std::size_t m = dists.size();
    if (u.size() != m)
        throw std::invalid_argument("upper_start: uniform vector size mismatch");
    const Support s = dists.front().support();
    std::vector<double> x(m, s.hi);
    gibbs_sweep(dists, x, u);
    return x;
}

// Scalar start value for the lower trajectory of the depth-n attempt.
// A staggered chain runs one component at a time: component m is seeded at
// time -(n+m-1) by a plain quantile draw, and each step down to component 1
// draws below the previous component's value using the matching stored
// uniform (component j's value uses vector V^{(-(n+j-1))}, 1-based). The
// resulting scalar is a lower bound for every coordinate, so all m lower
// components start at it. Store is any type exposing
// `const std::vector<double>& row(int t)` with t >= 0 meaning time -t.
template <class Store>
double lower_start(const std::vector<Distribution>& dists, Store& store, int n) {
    const int m = static_cast<int>(dists.size());
    if (n < 1) throw std::invalid_argument("lower_start: attempt depth must be >= 1");
    double x = dists[static_cast<std::size_t>(m - 1)].quantile(
        store.row(n + m - 1)[static_cast<std::size_t>(m - 1)]);
    for (int j = m - 2; j >= 0; --j) {
        const auto& dj = dists[static_cast<std::size_t>(j)];
        x = dj.quantile(dj.cdf(x) * store.row(n + j)[static_cast<std::size_t>(j)]);
    }
    return x;
}

}  // namespace ocnid
