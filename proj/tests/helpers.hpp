#pragma once

// Shared helpers for the test suites: an adaptive Simpson integrator used as
// an independent oracle for cdf values, and a fixed-table uniform store for
// driving the coupling machinery with hand-chosen randomness.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testutil {

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a,b] to absolute tolerance tol.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = detail::simpson(a, b, fa, fm, fb);
    return detail::adaptive_step(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Uniform store with caller-supplied rows; row t must exist.
class FakeStore {
public:
    explicit FakeStore(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {}

    const std::vector<double>& row(int t) const {
        if (t < 0 || static_cast<std::size_t>(t) >= rows_.size())
            throw std::out_of_range("FakeStore: row " + std::to_string(t) + " not provided");
        return rows_[static_cast<std::size_t>(t)];
    }

private:
    std::vector<std::vector<double>> rows_;
};

}  // namespace testutil
