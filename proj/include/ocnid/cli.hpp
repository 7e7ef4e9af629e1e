#pragma once

// Command implementations behind the `ocnid` executable. They live here, not
// in the tool's main(), so the test suite can drive the exact code paths the
// binary runs — including exit-code mapping — without spawning processes.
//
// Exit codes: 0 success, 2 configuration error (bad flags, bad distribution
// specs, mismatched supports), 3 data/file error, 4 non-coalescence within
// the depth budget.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "ocnid/bpca.hpp"
#include "ocnid/cftp.hpp"
#include "ocnid/io.hpp"
#include "ocnid/oracle.hpp"
#include "ocnid/stats.hpp"

namespace ocnid {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNoCoalescence = 4;

struct SampleConfig {
    std::vector<std::string> dist_specs;
    double eps = 1e-4;
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    int max_n = 10000;
    int threads = 1;
    int bins = 50;
    bool bct_only = false;
    bool doubling = false;
    std::string out_prefix = "ocnid_";
};

struct OracleConfig {
    std::vector<std::string> dist_specs;
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    std::string out_prefix = "ocnid_";
};

struct BpcaConfig {
    std::string data_path;  // CSV matrix; empty when simulating
    std::string simulate;   // "paper8" for the built-in benchmark set
    double alpha = 2.0;
    double beta = 3.0;
    double eps = 1e-4;
    std::size_t n = 10000;  // draws per candidate q
    std::uint64_t seed = 1;
    int max_n = 10000;
    int threads = 1;
    std::string out_prefix = "ocnid_";
};

inline int run_sample(const SampleConfig& cfg, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
    std::vector<Distribution> dists;
    try {
        if (cfg.dist_specs.size() < 1) throw std::invalid_argument("need at least one --dist");
        dists = parse_distributions(cfg.dist_specs);
        validate_family(dists);
        if (!(cfg.eps > 0.0)) throw std::invalid_argument("--eps must be positive");
        if (cfg.n < 1) throw std::invalid_argument("--n must be at least 1");
        if (cfg.max_n < 1) throw std::invalid_argument("--max-n must be at least 1");
        if (cfg.bins < 1) throw std::invalid_argument("--bins must be at least 1");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::vector<PerfectDraw> draws;
    try {
        BatchOptions opts;
        opts.max_n = cfg.max_n;
        opts.threads = cfg.threads;
        opts.schedule = cfg.doubling ? Schedule::Doubling : Schedule::Linear;
        draws = draw_batch(dists, cfg.eps, cfg.n, cfg.seed, opts);
    } catch (const NonCoalescenceError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNoCoalescence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        BatchSummary summary = summarize_batch(draws, cfg.eps, cfg.seed);
        write_json(cfg.out_prefix + "summary.json", summary_to_json(summary));
        if (!cfg.bct_only) {
            write_draws_csv(cfg.out_prefix + "draws.csv", draws, dists.size());
            std::vector<Histogram> hists;
            std::vector<double> column(draws.size());
            for (std::size_t c = 0; c < dists.size(); ++c) {
                for (std::size_t k = 0; k < draws.size(); ++k) column[k] = draws[k].values[c];
                SummaryStats ss = summarize(column);
                double lo = ss.min, hi = ss.max;
                if (!(lo < hi)) {  // constant column: widen so the bins are valid
                    lo -= 0.5;
                    hi += 0.5;
                }
                hists.push_back(histogram(column, cfg.bins, lo, hi));
            }
            write_histograms_csv(cfg.out_prefix + "hist.csv", hists);
        }
        out << summary_to_json(summary).dump(2) << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

inline int run_oracle(const OracleConfig& cfg, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
    std::vector<Distribution> dists;
    try {
        if (cfg.dist_specs.size() < 1) throw std::invalid_argument("need at least one --dist");
        dists = parse_distributions(cfg.dist_specs);
        validate_family(dists);
        if (cfg.n < 1) throw std::invalid_argument("--n must be at least 1");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        OracleBatch batch = oracle_batch(dists, cfg.n, cfg.seed);
        write_matrix_csv(cfg.out_prefix + "oracle_draws.csv", batch.draws, dists.size());
        nlohmann::json j{{"n_draws", batch.draws.size()},
                         {"proposals", batch.proposals},
                         {"acceptance_rate", batch.acceptance_rate},
                         {"seed", cfg.seed}};
        write_json(cfg.out_prefix + "oracle_summary.json", j);
        out << j.dump(2) << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

inline int run_bpca(const BpcaConfig& cfg, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    try {
        bool have_data = !cfg.data_path.empty();
        bool have_sim = !cfg.simulate.empty();
        if (have_data == have_sim)
            throw std::invalid_argument("give exactly one of --data FILE or --simulate NAME");
        if (have_sim && cfg.simulate != "paper8")
            throw std::invalid_argument("unknown --simulate data set '" + cfg.simulate +
                                        "' (known: paper8)");
        if (!(cfg.eps > 0.0)) throw std::invalid_argument("--eps must be positive");
        if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0))
            throw std::invalid_argument("--alpha and --beta must be positive");
        if (cfg.n < 1) throw std::invalid_argument("--n must be at least 1");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    EigenData eigs;
    try {
        std::vector<std::vector<double>> data = cfg.data_path.empty()
                                                    ? simulate_paper8(cfg.seed)
                                                    : read_csv_matrix(cfg.data_path);
        eigs = covariance_eigs(data);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }

    try {
        ScanOptions opts;
        opts.max_n = cfg.max_n;
        opts.threads = cfg.threads;
        std::vector<ScanRow> rows = model_scan(eigs, cfg.alpha, cfg.beta, cfg.eps, cfg.n,
                                               cfg.seed, opts);
        write_scan_csv(cfg.out_prefix + "scan.csv", rows);
        nlohmann::json j = scan_to_json(rows);
        j["eigenvalues"] = eigs.g;
        j["n"] = eigs.n;
        j["d"] = eigs.d;
        j["alpha"] = cfg.alpha;
        j["beta"] = cfg.beta;
        j["epsilon"] = cfg.eps;
        j["draws_per_q"] = cfg.n;
        j["seed"] = cfg.seed;
        write_json(cfg.out_prefix + "bpca.json", j);
        out << j.dump(2) << "\n";
    } catch (const NonCoalescenceError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNoCoalescence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace ocnid
