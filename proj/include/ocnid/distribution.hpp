#pragma once

// Continuous scalar families used as the heterogeneous components of the
// constrained sampler. Each family exposes cdf / quantile / log_pdf plus its
// support; quantiles and cdfs are written against the stable forms
// (expm1/log1p) so truncated inversion stays accurate deep in the tails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocnid/math.hpp"

namespace ocnid {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Family {
    Exponential,
    Weibull,
    Cauchy,
    FoldedCauchy,
    Pareto,
    InverseGamma,
};

struct Support {
    double lo;
    double hi;
    bool operator==(const Support& o) const { return lo == o.lo && hi == o.hi; }
    bool operator!=(const Support& o) const { return !(*this == o); }
};

namespace detail {

// Inverts the inverse-gamma cdf (or, on the survival scale, its upper tail
// probability) by geometric bracket expansion followed by safeguarded Newton
// (bisection fallback keeps the iterate inside the bracket). Solving directly
// on the survival scale preserves relative accuracy for tail probabilities
// far below machine epsilon. Relative tolerance 1e-12.
inline double invgamma_root(double alpha, double beta, double target, bool survival_scale) {
    // h(x) is increasing with the root at the requested quantile, and
    // h'(x) = pdf(x) on either scale.
    auto h = [&](double x) {
        return survival_scale ? target - reg_incomplete_gamma(alpha, beta / x)
                              : reg_incomplete_gamma_upper(alpha, beta / x) - target;
    };
    auto pdf = [&](double x) {
        return std::exp(alpha * std::log(beta) - std::lgamma(alpha) -
                        (alpha + 1.0) * std::log(x) - beta / x);
    };
    double lo = beta / (alpha + 1.0) * 1e-6;
    double hi = beta * 1e6;
    // Each expansion step that fails certifies the previous bound as the
    // opposite bracket edge, keeping the final bracket one step (1e3) wide.
    while (h(lo) > 0.0 && lo > 1e-300) {
        hi = std::min(hi, lo);
        lo *= 1e-3;
    }
    while (h(hi) < 0.0 && hi < 1e300) {
        lo = std::max(lo, hi);
        hi *= 1e3;
    }
    // Newton on the log-probability scale: the pinned tail probability is
    // log-convex in x, so the iteration converges quadratically across the
    // whole tail, where plain Newton creeps by a factor (1 + 1/alpha) per
    // step and can need hundreds of iterations for targets many decades
    // down. Geometric bisection of the bracket covers underflowed
    // probabilities and any step that escapes the bracket.
    const double log_target = std::log(target);
    double x = std::sqrt(lo * hi);
    for (int iter = 0; iter < 200; ++iter) {
        double p = survival_scale ? reg_incomplete_gamma(alpha, beta / x)
                                  : reg_incomplete_gamma_upper(alpha, beta / x);
        bool above_root = survival_scale ? (p < target) : (p > target);
        if (above_root) hi = x; else lo = x;
        double xn = 0.0;  // bisection fallback unless Newton produces a step
        if (p > 0.0 && std::isfinite(p)) {
            double g = std::log(p) - log_target;
            double step = g * p / pdf(x);
            xn = survival_scale ? x + step : x - step;
        }
        if (!std::isfinite(xn) || !(xn > lo && xn < hi)) xn = std::sqrt(lo * hi);
        if (std::fabs(xn - x) <= 1e-12 * xn) return xn;
        x = xn;
    }
    return x;
}

inline std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace detail

class Distribution {
public:
    static Distribution exponential(double theta) {
        return Distribution(Family::Exponential, theta, 0.0);
    }
    static Distribution weibull(double alpha, double theta) {
        return Distribution(Family::Weibull, theta, alpha);
    }
    static Distribution cauchy(double theta) {
        return Distribution(Family::Cauchy, theta, 0.0);
    }
    static Distribution folded_cauchy(double theta) {
        return Distribution(Family::FoldedCauchy, theta, 0.0);
    }
    static Distribution pareto(double theta) {
        return Distribution(Family::Pareto, theta, 0.0);
    }
    static Distribution inverse_gamma(double alpha, double beta) {
        return Distribution(Family::InverseGamma, beta, alpha);
    }

    Family family() const { return family_; }

    Support support() const {
        if (family_ == Family::Cauchy) return {-kInf, kInf};
        return {0.0, kInf};
    }

    double cdf(double x) const {
        const Support s = support();
        if (x <= s.lo) return 0.0;
        if (x >= s.hi) return 1.0;
        switch (family_) {
            case Family::Exponential:
                return -std::expm1(-theta_ * x);
            case Family::Weibull:
                return -std::expm1(-std::pow(theta_ * x, shape_));
            case Family::Cauchy:
                // atan(z) + atan(1/z) == pi/2: the cotangent form keeps the
                // lower-tail probability accurate in relative terms.
                return x < 0.0 ? std::atan(-1.0 / (theta_ * x)) / kPi
                               : 0.5 + std::atan(theta_ * x) / kPi;
            case Family::FoldedCauchy:
                return 2.0 / kPi * std::atan(theta_ * x);
            case Family::Pareto:
                return -std::expm1(-theta_ * std::log1p(x));
            case Family::InverseGamma:
                return reg_incomplete_gamma_upper(shape_, theta_ / x);
        }
        return 0.0;  // unreachable
    }

    // Upper tail probability 1 - cdf(x), computed to full relative accuracy
    // deep in the tail (where the cdf itself rounds to 1).
    double survival(double x) const {
        const Support s = support();
        if (x <= s.lo) return 1.0;
        if (x >= s.hi) return 0.0;
        switch (family_) {
            case Family::Exponential:
                return std::exp(-theta_ * x);
            case Family::Weibull:
                return std::exp(-std::pow(theta_ * x, shape_));
            case Family::Cauchy:
                return x > 0.0 ? std::atan(1.0 / (theta_ * x)) / kPi
                               : 0.5 - std::atan(theta_ * x) / kPi;
            case Family::FoldedCauchy:
                return 2.0 / kPi * std::atan(1.0 / (theta_ * x));
            case Family::Pareto:
                return std::exp(-theta_ * std::log1p(x));
            case Family::InverseGamma:
                return reg_incomplete_gamma(shape_, theta_ / x);
        }
        return 0.0;  // unreachable
    }

    double quantile(double p) const {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::domain_error("quantile: probability must lie in [0,1]");
        const Support s = support();
        if (p == 0.0) return s.lo;
        if (p == 1.0) return s.hi;
        switch (family_) {
            case Family::Exponential:
                return -std::log1p(-p) / theta_;
            case Family::Weibull:
                return std::pow(-std::log1p(-p), 1.0 / shape_) / theta_;
            case Family::Cauchy:
                return std::tan(kPi * (p - 0.5)) / theta_;
            case Family::FoldedCauchy:
                return std::tan(kPi * p / 2.0) / theta_;
            case Family::Pareto:
                return std::expm1(-std::log1p(-p) / theta_);
            case Family::InverseGamma:
                return detail::invgamma_root(shape_, theta_, p, false);
        }
        return 0.0;  // unreachable
    }

    // Inverse of the survival function: the x with survival(x) == s. Agrees
    // with quantile(1 - s) but stays exact for tail probabilities s far
    // smaller than machine epsilon.
    double quantile_upper(double s) const {
        if (!(s >= 0.0 && s <= 1.0))
            throw std::domain_error("quantile_upper: probability must lie in [0,1]");
        const Support sup = support();
        if (s == 0.0) return sup.hi;
        if (s == 1.0) return sup.lo;
        switch (family_) {
            case Family::Exponential:
                return -std::log(s) / theta_;
            case Family::Weibull:
                return std::pow(-std::log(s), 1.0 / shape_) / theta_;
            case Family::Cauchy:
                // tan(pi(0.5 - s)) == 1/tan(pi s); the cotangent form is the
                // accurate one in the upper tail.
                return s < 0.5 ? 1.0 / (theta_ * std::tan(kPi * s))
                               : std::tan(kPi * (0.5 - s)) / theta_;
            case Family::FoldedCauchy:
                return 1.0 / (theta_ * std::tan(kPi * s / 2.0));
            case Family::Pareto:
                return std::expm1(-std::log(s) / theta_);
            case Family::InverseGamma:
                return detail::invgamma_root(shape_, theta_, s, true);
        }
        return 0.0;  // unreachable
    }

    double log_pdf(double x) const {
        switch (family_) {
            case Family::Exponential:
                if (x < 0.0) return -kInf;
                return std::log(theta_) - theta_ * x;
            case Family::Weibull: {
                if (x < 0.0) return -kInf;
                if (x == 0.0) {
                    if (shape_ < 1.0) return kInf;
                    if (shape_ == 1.0) return std::log(theta_);
                    return -kInf;
                }
                double tx = theta_ * x;
                return std::log(shape_ * theta_) + (shape_ - 1.0) * std::log(tx) -
                       std::pow(tx, shape_);
            }
            case Family::Cauchy: {
                double tx = theta_ * x;
                return std::log(theta_ / kPi) - std::log1p(tx * tx);
            }
            case Family::FoldedCauchy: {
                if (x < 0.0) return -kInf;
                double tx = theta_ * x;
                return std::log(2.0 * theta_ / kPi) - std::log1p(tx * tx);
            }
            case Family::Pareto:
                if (x < 0.0) return -kInf;
                return std::log(theta_) - (theta_ + 1.0) * std::log1p(x);
            case Family::InverseGamma:
                if (x <= 0.0) return -kInf;
                return shape_ * std::log(theta_) - std::lgamma(shape_) -
                       (shape_ + 1.0) * std::log(x) - theta_ / x;
        }
        return -kInf;  // unreachable
    }

    double pdf(double x) const { return std::exp(log_pdf(x)); }

    // Canonical spec string, e.g. "exp:2" or "invgamma:2:3".
    std::string name() const {
        using detail::format_param;
        switch (family_) {
            case Family::Exponential: return "exp:" + format_param(theta_);
            case Family::Weibull: return "weibull:" + format_param(shape_) + ":" + format_param(theta_);
            case Family::Cauchy: return "cauchy:" + format_param(theta_);
            case Family::FoldedCauchy: return "fcauchy:" + format_param(theta_);
            case Family::Pareto: return "pareto:" + format_param(theta_);
            case Family::InverseGamma: return "invgamma:" + format_param(shape_) + ":" + format_param(theta_);
        }
        return "?";  // unreachable
    }

    // Rate/scale parameter theta (beta for the inverse gamma).
    double theta() const { return theta_; }
    // Shape parameter (Weibull alpha / inverse-gamma alpha); 0 if none.
    double shape() const { return shape_; }

private:
    Distribution(Family f, double theta, double shape) : family_(f), theta_(theta), shape_(shape) {
        if (!(theta > 0.0) || !std::isfinite(theta))
            throw std::invalid_argument("distribution parameters must be positive and finite");
        bool needs_shape = (f == Family::Weibull || f == Family::InverseGamma);
        if (needs_shape && (!(shape > 0.0) || !std::isfinite(shape)))
            throw std::invalid_argument("distribution parameters must be positive and finite");
    }

    Family family_;
    double theta_;
    double shape_;
};

// Parses the distribution grammar: "exp:theta", "weibull:alpha:theta",
// "cauchy:theta", "fcauchy:theta", "pareto:theta", "invgamma:alpha:beta".
inline Distribution parse_distribution(const std::string& text) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ':')) parts.push_back(token);
    if (parts.empty())
        throw std::invalid_argument("empty distribution spec");

    auto number = [&](std::size_t i) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(parts[i], &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad numeric parameter '" + parts[i] + "' in spec '" + text + "'");
        }
        if (used != parts[i].size())
            throw std::invalid_argument("bad numeric parameter '" + parts[i] + "' in spec '" + text + "'");
        return v;
    };
    auto want = [&](std::size_t n) {
        if (parts.size() != n + 1)
            throw std::invalid_argument("spec '" + text + "' expects " + std::to_string(n) +
                                        " parameter(s), got " + std::to_string(parts.size() - 1));
    };

    const std::string& fam = parts[0];
    if (fam == "exp") {
        want(1);
        return Distribution::exponential(number(1));
    } else if (fam == "weibull") {
        want(2);
        return Distribution::weibull(number(1), number(2));
    } else if (fam == "cauchy") {
        want(1);
        return Distribution::cauchy(number(1));
    } else if (fam == "fcauchy") {
        want(1);
        return Distribution::folded_cauchy(number(1));
    } else if (fam == "pareto") {
        want(1);
        return Distribution::pareto(number(1));
    } else if (fam == "invgamma") {
        want(2);
        return Distribution::inverse_gamma(number(1), number(2));
    }
    throw std::invalid_argument("unknown family '" + fam +
                                "' (known: exp, weibull, cauchy, fcauchy, pareto, invgamma)");
}

inline std::vector<Distribution> parse_distributions(const std::vector<std::string>& specs) {
    std::vector<Distribution> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(parse_distribution(s));
    return out;
}

// The coupled chain needs one common support: mixing a real-line family with
// positive-support families breaks the boundary conventions, so reject it up
// front, naming the first offending component (1-based).
inline void validate_family(const std::vector<Distribution>& dists) {
    if (dists.empty()) throw std::invalid_argument("need at least one distribution");
    const Support s0 = dists.front().support();
    for (std::size_t i = 1; i < dists.size(); ++i) {
        if (dists[i].support() != s0) {
            std::ostringstream msg;
            msg << "support mismatch: component " << (i + 1) << " (" << dists[i].name()
                << ") has a different support than component 1 (" << dists.front().name() << ")";
            throw std::invalid_argument(msg.str());
        }
    }
}

}  // namespace ocnid
