#pragma once

// Randomness layer. Every perfect draw owns an independent substream derived
// from (seed, draw index), so batches are reproducible under any execution
// order, and each substream's uniform vectors are materialized once and
// reused verbatim across coupling attempts.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ocnid {

// SplitMix64 finalizer; decorrelates consecutive substream indices.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Engine for substream `index` of master seed `seed`.
inline std::mt19937_64 make_substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ull));
}

// Uniform on the open interval (0,1): 53-bit mantissa draw, clamped away from
// the endpoints so downstream quantile transforms never see 0 or 1.
inline double uniform01(std::mt19937_64& eng) {
    constexpr double kScale = 0x1.0p-53;
    constexpr double kLo = 0x1.0p-53;
    constexpr double kHi = 1.0 - 0x1.0p-53;
    double u = static_cast<double>(eng() >> 11) * kScale;
    if (u < kLo) u = kLo;
    if (u > kHi) u = kHi;
    return u;
}

// Standard normal via Box-Muller (one value per call; caches the pair).
class GaussianSource {
public:
    explicit GaussianSource(std::mt19937_64& eng) : eng_(eng) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(eng_);
        double u2 = uniform01(eng_);
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64& eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Lazily extended table of the uniform vectors driving one perfect draw.
// Row t holds the m-vector consumed by the sweep applied at time -t; rows are
// always generated in increasing t, so the mapping from the substream to
// vector positions is independent of the caller's access pattern, and a row,
// once generated, is never regenerated. Construction materializes rows
// 0..m (the vectors attached to times -m..0 that the start-value recursion
// and the first coupling attempt share).
class UniformStore {
public:
    UniformStore(int m, std::uint64_t seed, std::uint64_t draw_index)
        : m_(m), eng_(make_substream(seed, draw_index)) {
        if (m <= 0) throw std::invalid_argument("UniformStore: m must be positive");
        ensure(m_);
    }

    // Vector of uniforms for time -t (t >= 0). Extends the table as needed.
    const std::vector<double>& row(int t) {
        if (t < 0) throw std::invalid_argument("UniformStore: negative row index");
        ensure(t);
        return rows_[static_cast<std::size_t>(t)];
    }

    int rows_generated() const { return static_cast<int>(rows_.size()); }
    int dimension() const { return m_; }

private:
    void ensure(int t) {
        while (static_cast<int>(rows_.size()) <= t) {
            std::vector<double> r(static_cast<std::size_t>(m_));
            for (double& u : r) u = uniform01(eng_);
            rows_.push_back(std::move(r));
        }
    }

    int m_;
    std::mt19937_64 eng_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace ocnid
