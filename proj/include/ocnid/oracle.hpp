#pragma once

// Independent validation path for the constrained sampler: draw each
// component from its own marginal and accept only vectors that already
// satisfy the strict ordering. Exact but potentially slow — acceptance decays
// with dimension and with how strongly the parameters disagree with the
// constraint — so a draw aborts if it burns through a large proposal window
// with nothing accepted.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocnid/distribution.hpp"
#include "ocnid/math.hpp"
#include "ocnid/rng.hpp"

namespace ocnid {

inline constexpr std::uint64_t kOracleWindow = 10'000'000;  // acceptance below 1e-7 aborts

// One accepted vector; adds the number of proposals consumed to *proposals.
inline std::vector<double> rejection_draw(const std::vector<Distribution>& dists,
                                          std::mt19937_64& eng,
                                          std::uint64_t* proposals = nullptr) {
    const std::size_t m = dists.size();
    std::vector<double> x(m);
    for (std::uint64_t attempt = 1; attempt <= kOracleWindow; ++attempt) {
        bool ordered = true;
        for (std::size_t i = 0; i < m; ++i) {
            x[i] = dists[i].quantile(uniform01(eng));
            if (i > 0 && !(x[i - 1] < x[i])) {
                // Reject early, but keep the uniform stream aligned by
                // consuming the remaining components of this proposal.
                for (std::size_t j = i + 1; j < m; ++j) uniform01(eng);
                ordered = false;
                break;
            }
        }
        if (ordered) {
            if (proposals) *proposals += attempt;
            return x;
        }
    }
    throw std::runtime_error(
        "rejection oracle: no accepted proposal in a window of " +
        std::to_string(kOracleWindow) + " attempts; the configuration looks infeasible");
}

struct OracleBatch {
    std::vector<std::vector<double>> draws;
    std::uint64_t proposals = 0;
    double acceptance_rate = 0.0;
};

// Batch of oracle draws under the same substream convention as the perfect
// sampler (draw k uses substream k), so batches are reproducible and
// embarrassingly parallel if ever needed.
inline OracleBatch oracle_batch(const std::vector<Distribution>& dists, std::size_t count,
                                std::uint64_t seed) {
    validate_family(dists);
    OracleBatch out;
    out.draws.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::mt19937_64 eng = make_substream(seed, k);
        out.draws[k] = rejection_draw(dists, eng, &out.proposals);
    }
    if (out.proposals > 0)
        out.acceptance_rate = static_cast<double>(count) / static_cast<double>(out.proposals);
    return out;
}

struct KsResult {
    double statistic = 0.0;  // sup-norm distance between the two ECDFs
    double p_value = 1.0;    // asymptotic two-sample tail probability
};

// Two-sample Kolmogorov-Smirnov distance with the asymptotic p-value.
inline KsResult two_sample_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("two_sample_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double xa = a[i], xb = b[j];
        if (xa <= xb) ++i;
        if (xb <= xa) ++j;
        double diff = std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb);
        if (diff > d) d = diff;
    }
    KsResult r;
    r.statistic = d;
    double ne = na * nb / (na + nb);
    double sq = std::sqrt(ne);
    r.p_value = kolmogorov_tail((sq + 0.12 + 0.11 / sq) * d);
    return r;
}

}  // namespace ocnid
