#pragma once

// Special-function kernels shared by the distribution layer and the test
// statistics: regularized incomplete gamma (series + continued fraction) and
// the asymptotic Kolmogorov tail probability.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ocnid {

inline constexpr double kPi = 3.14159265358979323846;

namespace detail {

inline constexpr int kGammaMaxIter = 500;
inline constexpr double kGammaEps = 1e-16;
inline constexpr double kFpMin = 1e-300;

// Series expansion of P(a,x); converges quickly for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kGammaMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kGammaEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a,x); converges for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kGammaMaxIter; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kGammaEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Regularized lower incomplete gamma P(a,x) = gamma(a,x) / Gamma(a).
inline double reg_incomplete_gamma(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("reg_incomplete_gamma: a must be positive");
    if (x < 0.0) throw std::domain_error("reg_incomplete_gamma: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x), computed on the
// branch that avoids cancellation.
inline double reg_incomplete_gamma_upper(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("reg_incomplete_gamma_upper: a must be positive");
    if (x < 0.0) throw std::domain_error("reg_incomplete_gamma_upper: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

// Asymptotic Kolmogorov tail Q_KS(lambda) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
// Used for the two-sample test's approximate p-value.
inline double kolmogorov_tail(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    double two_l2 = 2.0 * lambda * lambda;
    for (int j = 1; j <= 200; ++j) {
        double term = std::exp(-two_l2 * j * j);
        sum += sign * term;
        if (term < 1e-16 * std::fabs(sum) || term < 1e-300) break;
        sign = -sign;
    }
    double p = 2.0 * sum;
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

}  // namespace ocnid
