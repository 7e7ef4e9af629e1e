#pragma once

// Bayesian PCA dimensionality selection driven by the constrained sampler.
// Conditional on the retained dimension q, the posterior factorizes over the
// eigen-basis into independent inverse-gamma marginals for the retained
// eigenvalues and the residual variance, constrained by the eigenvalue
// ordering sigma^2 < lambda_q < ... < lambda_1 — exactly the setting the
// perfect sampler handles. A scan over q draws posterior samples, forms a
// MAP plug-in estimate, and scores each q with BIC and Laplace evidence
// approximations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ocnid/cftp.hpp"
#include "ocnid/distribution.hpp"
#include "ocnid/rng.hpp"

namespace ocnid {

// Sample covariance eigenvalues plus the dimensions they came from.
struct EigenData {
    std::vector<double> g;  // eigenvalues, descending
    int n = 0;              // number of observations
    int d = 0;              // ambient dimension
};

namespace detail {

// Cyclic Jacobi eigenvalue iteration for a symmetric matrix, run until the
// off-diagonal Frobenius norm drops below 1e-12 times the matrix norm.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t d = a.size();
    double frob = 0.0;
    for (const auto& row : a)
        for (double v : row) frob += v * v;
    frob = std::sqrt(frob);
    const double tol = 1e-12 * (frob > 0.0 ? frob : 1.0);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) off += 2.0 * a[i][j] * a[i][j];
        if (std::sqrt(off) <= tol) break;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                if (a[p][q] == 0.0) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(d);
    for (std::size_t i = 0; i < d; ++i) eig[i] = a[i][i];
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

}  // namespace detail

// Eigenvalues of the maximum-likelihood covariance (1/N normalization) of a
// row-major N x d data matrix, sorted descending.
inline EigenData covariance_eigs(const std::vector<std::vector<double>>& data) {
    if (data.size() < 2) throw std::invalid_argument("covariance_eigs: need at least two rows");
    const std::size_t n = data.size();
    const std::size_t d = data.front().size();
    if (d == 0) throw std::invalid_argument("covariance_eigs: empty rows");
    for (const auto& row : data)
        if (row.size() != d)
            throw std::invalid_argument("covariance_eigs: ragged data matrix");

    std::vector<double> mean(d, 0.0);
    for (const auto& row : data)
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    for (double& v : mean) v /= static_cast<double>(n);

    std::vector<std::vector<double>> s(d, std::vector<double>(d, 0.0));
    for (const auto& row : data) {
        for (std::size_t i = 0; i < d; ++i) {
            double di = row[i] - mean[i];
            for (std::size_t j = i; j < d; ++j) s[i][j] += di * (row[j] - mean[j]);
        }
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            s[i][j] /= static_cast<double>(n);
            s[j][i] = s[i][j];
        }

    EigenData out;
    out.g = detail::jacobi_eigenvalues(std::move(s));
    out.n = static_cast<int>(n);
    out.d = static_cast<int>(d);
    return out;
}

struct BpcaModel {
    EigenData data;
    int q = 1;           // retained dimension
    double alpha = 2.0;  // inverse-gamma prior shape
    double beta = 3.0;   // inverse-gamma prior scale

    void validate() const {
        if (data.d < 2 || static_cast<int>(data.g.size()) != data.d)
            throw std::invalid_argument("bpca: eigenvalue vector inconsistent with dimension");
        if (data.n < 2) throw std::invalid_argument("bpca: need at least two observations");
        if (q < 1 || q > data.d - 1)
            throw std::invalid_argument("bpca: q must lie in [1, d-1]");
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("bpca: prior parameters must be positive");
        for (std::size_t i = 0; i < data.g.size(); ++i) {
            if (!(data.g[i] > 0.0))
                throw std::invalid_argument("bpca: eigenvalues must be positive");
            if (i > 0 && data.g[i] > data.g[i - 1])
                throw std::invalid_argument("bpca: eigenvalues must be sorted descending");
        }
    }

    // Residual eigenvalue mass c(q) = sum_{i>q} g_i.
    double c() const {
        double s = 0.0;
        for (int i = q; i < data.d; ++i) s += data.g[static_cast<std::size_t>(i)];
        return s;
    }
};

// Posterior parameters (sigma^2, lambda_1..lambda_q descending).
struct ThetaQ {
    std::vector<double> lambda;  // descending: lambda[0] is the largest
    double sigma2 = 0.0;
};

// Conditional posterior marginals in the ascending orientation consumed by
// the sampler: component 1 is sigma^2, components 2..q+1 are
// lambda_q,...,lambda_1. Retained eigenvalue i has marginal
// IG(N/2 + alpha, N g_i / 2 + beta); the residual variance pools the trailing
// eigenvalue mass: IG(N(d-q)/2 + alpha, N c(q)/2 + beta).
inline std::vector<Distribution> posterior_marginals(const BpcaModel& model) {
    model.validate();
    const double n = static_cast<double>(model.data.n);
    std::vector<Distribution> dists;
    dists.reserve(static_cast<std::size_t>(model.q) + 1);
    dists.push_back(Distribution::inverse_gamma(n * (model.data.d - model.q) / 2.0 + model.alpha,
                                                n * model.c() / 2.0 + model.beta));
    for (int i = model.q - 1; i >= 0; --i)
        dists.push_back(Distribution::inverse_gamma(
            n / 2.0 + model.alpha, n * model.data.g[static_cast<std::size_t>(i)] / 2.0 + model.beta));
    return dists;
}

// Maps an ascending sampler state back to (sigma^2, descending lambdas).
inline ThetaQ theta_from_state(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("theta_from_state: state too short");
    ThetaQ t;
    t.sigma2 = x.front();
    t.lambda.assign(x.rbegin(), x.rend() - 1);
    return t;
}

struct ThetaDraw {
    ThetaQ theta;
    int bct = 0;
    double gap = 0.0;
};

// One perfect posterior draw of theta for the given q.
template <class Store>
ThetaDraw sample_theta(const BpcaModel& model, double eps, Store& store, int max_n = 10000) {
    std::vector<Distribution> dists = posterior_marginals(model);
    PerfectDraw d = perfect_draw(dists, eps, store, max_n);
    ThetaDraw out;
    out.theta = theta_from_state(d.values);
    out.bct = d.bct;
    out.gap = d.gap;
    return out;
}

// Eigen-basis log likelihood of the data given theta (second-stage form:
// the retained directions contribute through g_i/lambda_i, the residual
// through the pooled mass c(q)).
inline double log_likelihood2(const BpcaModel& model, const ThetaQ& theta) {
    const double n = static_cast<double>(model.data.n);
    const int q = model.q;
    double ll = 0.0;
    for (int i = 0; i < q; ++i) {
        double lam = theta.lambda[static_cast<std::size_t>(i)];
        ll += -(n / 2.0) * std::log(lam) -
              (n / 2.0) * model.data.g[static_cast<std::size_t>(i)] / lam;
    }
    ll += -(n * (model.data.d - q) / 2.0) * std::log(theta.sigma2) -
          (n / 2.0) * model.c() / theta.sigma2;
    return ll;
}

// Log posterior density (up to the model-independent data normalization):
// likelihood + independent IG(alpha,beta) priors + the log (q+1)! ordering
// factor. States violating the strict ordering sigma^2 < lambda_q < ... <
// lambda_1 have zero posterior mass.
inline double log_posterior(const BpcaModel& model, const ThetaQ& theta) {
    const int q = model.q;
    if (static_cast<int>(theta.lambda.size()) != q)
        throw std::invalid_argument("log_posterior: theta has wrong number of eigenvalues");
    if (!(theta.sigma2 > 0.0)) return -kInf;
    double prev = theta.sigma2;
    for (int i = q - 1; i >= 0; --i) {  // ascending check: sigma^2 < lambda_q < ...
        double lam = theta.lambda[static_cast<std::size_t>(i)];
        if (!(prev < lam)) return -kInf;
        prev = lam;
    }
    const Distribution prior = Distribution::inverse_gamma(model.alpha, model.beta);
    double lp = std::lgamma(static_cast<double>(q) + 2.0);  // log (q+1)!
    for (double lam : theta.lambda) lp += prior.log_pdf(lam);
    lp += prior.log_pdf(theta.sigma2);
    return lp + log_likelihood2(model, theta);
}

// Sample MAP: the draw with the largest log posterior.
inline ThetaQ map_estimate(const std::vector<ThetaQ>& draws, const BpcaModel& model) {
    if (draws.empty()) throw std::invalid_argument("map_estimate: no draws");
    std::size_t best = 0;
    double best_lp = -kInf;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        double lp = log_posterior(model, draws[i]);
        if (lp > best_lp) {
            best_lp = lp;
            best = i;
        }
    }
    return draws[best];
}

// Number of free eigenvector parameters for retained dimension q.
inline int eigenvector_dof(int d, int q) { return d * q - q * (q + 1) / 2; }

// BIC evidence approximation (log scale) at the plug-in theta-hat:
//   -(N/2) sum log lambda-hat_i - (N(d-q)/2) log sigma-hat^2 - (k + q/2) log N.
inline double bic_evidence(const BpcaModel& model, const ThetaQ& theta_hat) {
    const double n = static_cast<double>(model.data.n);
    const int q = model.q;
    const int k = eigenvector_dof(model.data.d, q);
    double s = 0.0;
    for (int i = 0; i < q; ++i) s += std::log(theta_hat.lambda[static_cast<std::size_t>(i)]);
    return -(n / 2.0) * s - (n * (model.data.d - q) / 2.0) * std::log(theta_hat.sigma2) -
           (static_cast<double>(k) + q / 2.0) * std::log(n);
}

enum class LaplaceVariant {
    Literal,    // residual factor (sigma-hat^2)^{+N(d-q)} as printed in the source formula
    Corrected,  // residual factor (sigma-hat^2)^{-N(d-q)/2}, matching the BIC limit
};

// Laplace evidence approximation (log scale). Both variants share
//   2^{(k-q)/2} N^{-q/2} |A|^{-1/2} prod_{i=1..q} Gamma((d-i)/2)
// with log |A| = k log N + sum_{i<=q, j>i} [log(1/lt_j - 1/lt_i) + log(lh_i - lh_j)],
// where the plug-in spectrum is padded with sigma-hat^2 beyond q. They differ
// only in the residual-variance exponent (see LaplaceVariant).
inline double laplace_evidence(const BpcaModel& model, const ThetaQ& theta_hat,
                               LaplaceVariant variant) {
    const double n = static_cast<double>(model.data.n);
    const int d = model.data.d;
    const int q = model.q;
    const int k = eigenvector_dof(d, q);

    std::vector<double> lam_full(static_cast<std::size_t>(d), theta_hat.sigma2);
    for (int i = 0; i < q; ++i)
        lam_full[static_cast<std::size_t>(i)] = theta_hat.lambda[static_cast<std::size_t>(i)];

    double logdet_a = k * std::log(n);
    for (int i = 0; i < q; ++i) {
        for (int j = i + 1; j < d; ++j) {
            double inv_gap = 1.0 / lam_full[static_cast<std::size_t>(j)] -
                             1.0 / lam_full[static_cast<std::size_t>(i)];
            double gap = lam_full[static_cast<std::size_t>(i)] - lam_full[static_cast<std::size_t>(j)];
            if (!(inv_gap > 0.0) || !(gap > 0.0))
                throw std::runtime_error(
                    "laplace_evidence: degenerate evidence (coincident eigenvalue estimates)");
            logdet_a += std::log(inv_gap) + std::log(gap);
        }
    }
    double lgam = 0.0;
    for (int i = 1; i <= q; ++i) lgam += std::lgamma((d - i) / 2.0);

    double base = (k - q) / 2.0 * std::log(2.0) - (q / 2.0) * std::log(n) - 0.5 * logdet_a + lgam;
    if (variant == LaplaceVariant::Literal)
        return base + n * (d - q) * std::log(theta_hat.sigma2);
    return base - (n * (d - q) / 2.0) * std::log(theta_hat.sigma2);
}

struct ScanRow {
    int q = 0;
    double mean_bct = 0.0;
    int min_bct = 0;
    int max_bct = 0;
    double max_log_lik = 0.0;  // log likelihood at the sample MAP
    double bic = 0.0;
    double laplace_literal = 0.0;
    double laplace_corrected = 0.0;
    ThetaQ map;
};

struct ScanOptions {
    int max_n = 10000;
    int threads = 1;
};

// Full dimensionality scan: for each q in 1..d-1 draw `draws_per_q` perfect
// posterior samples, take the sample MAP, and score the model. Each q uses
// its own derived master seed so rows are independent and reproducible.
inline std::vector<ScanRow> model_scan(const EigenData& eigs, double alpha, double beta,
                                       double eps, std::size_t draws_per_q, std::uint64_t seed,
                                       const ScanOptions& opts = {}) {
    std::vector<ScanRow> rows;
    for (int q = 1; q <= eigs.d - 1; ++q) {
        BpcaModel model{eigs, q, alpha, beta};
        std::vector<Distribution> dists = posterior_marginals(model);

        BatchOptions bopts;
        bopts.max_n = opts.max_n;
        bopts.threads = opts.threads;
        std::uint64_t seed_q = splitmix64(seed + static_cast<std::uint64_t>(q));
        std::vector<PerfectDraw> draws = draw_batch(dists, eps, draws_per_q, seed_q, bopts);

        std::vector<ThetaQ> thetas;
        thetas.reserve(draws.size());
        for (const auto& dr : draws) thetas.push_back(theta_from_state(dr.values));

        ScanRow row;
        row.q = q;
        BatchSummary bs = summarize_batch(draws, eps, seed_q);
        row.mean_bct = bs.mean_bct;
        row.min_bct = bs.min_bct;
        row.max_bct = bs.max_bct;
        row.map = map_estimate(thetas, model);
        row.max_log_lik = log_likelihood2(model, row.map);
        row.bic = bic_evidence(model, row.map);
        row.laplace_literal = laplace_evidence(model, row.map, LaplaceVariant::Literal);
        row.laplace_corrected = laplace_evidence(model, row.map, LaplaceVariant::Corrected);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline int argmax_q(const std::vector<ScanRow>& rows, double ScanRow::*field) {
    if (rows.empty()) throw std::invalid_argument("argmax_q: empty scan");
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].*field > rows[best].*field) best = i;
    return rows[best].q;
}

// Synthetic benchmark data set: 100 draws from an 8-dimensional centered
// Gaussian with diagonal covariance (10, 8, 6, 4, 2, 0.5, 0.5, 0.5) — five
// directions of real signal over a noise floor of one-half.
inline std::vector<std::vector<double>> simulate_paper8(std::uint64_t seed) {
    constexpr int kN = 100;
    constexpr int kD = 8;
    const double var[kD] = {10.0, 8.0, 6.0, 4.0, 2.0, 0.5, 0.5, 0.5};
    std::mt19937_64 eng = make_substream(seed, 0);
    GaussianSource gauss(eng);
    std::vector<std::vector<double>> data(kN, std::vector<double>(kD));
    for (auto& row : data)
        for (int j = 0; j < kD; ++j) row[static_cast<std::size_t>(j)] = std::sqrt(var[j]) * gauss();
    return data;
}

}  // namespace ocnid
