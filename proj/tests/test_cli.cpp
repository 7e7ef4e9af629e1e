// Command layer: happy paths produce the documented tables, reruns are
// byte-identical, density columns integrate to one, and every failure mode
// maps to its contracted exit code (2 config, 3 data, 4 non-coalescence).

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ocnid/cli.hpp"
#include "ocnid/rng.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool exists(const std::string& path) { return std::ifstream(path).good(); }

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("sample command writes draws, summary, and histograms", "[cli]") {
    ocnid::SampleConfig cfg;
    cfg.dist_specs = {"exp:2", "exp:1"};
    cfg.n = 300;
    cfg.seed = 7;
    cfg.eps = 1e-4;
    cfg.out_prefix = "cli_a_";
    std::ostringstream out, err;
    REQUIRE(ocnid::run_sample(cfg, out, err) == 0);
    REQUIRE(exists("cli_a_draws.csv"));
    REQUIRE(exists("cli_a_summary.json"));
    REQUIRE(exists("cli_a_hist.csv"));

    std::string draws = slurp("cli_a_draws.csv");
    CHECK(count_lines(draws) == 301);  // header + 300 rows
    CHECK(draws.rfind("x_1,x_2,bct,gap\n", 0) == 0);

    nlohmann::json summary = nlohmann::json::parse(slurp("cli_a_summary.json"));
    CHECK(summary["n_draws"] == 300);
    CHECK(summary["epsilon"] == 1e-4);
    CHECK(summary["seed"] == 7);
    CHECK(summary["min_bct"] >= 1);
    CHECK(summary["mean_bct"].get<double>() >= 1.0);
    // stdout carries the same summary.
    CHECK(nlohmann::json::parse(out.str()) == summary);
}

TEST_CASE("sample reruns are byte-identical and thread-invariant", "[cli]") {
    ocnid::SampleConfig cfg;
    cfg.dist_specs = {"exp:8", "weibull:3:6", "pareto:4", "exp:2"};
    cfg.n = 200;
    cfg.seed = 123;
    cfg.out_prefix = "cli_b1_";
    std::ostringstream sink;
    REQUIRE(ocnid::run_sample(cfg, sink, sink) == 0);

    cfg.out_prefix = "cli_b2_";
    REQUIRE(ocnid::run_sample(cfg, sink, sink) == 0);

    cfg.out_prefix = "cli_b3_";
    cfg.threads = 3;
    REQUIRE(ocnid::run_sample(cfg, sink, sink) == 0);

    CHECK(slurp("cli_b1_draws.csv") == slurp("cli_b2_draws.csv"));
    CHECK(slurp("cli_b1_draws.csv") == slurp("cli_b3_draws.csv"));
    CHECK(slurp("cli_b1_summary.json") == slurp("cli_b2_summary.json"));
    CHECK(slurp("cli_b1_summary.json") == slurp("cli_b3_summary.json"));
    CHECK(slurp("cli_b1_hist.csv") == slurp("cli_b3_hist.csv"));
}

TEST_CASE("histogram table densities integrate to one per component", "[cli]") {
    ocnid::SampleConfig cfg;
    cfg.dist_specs = {"exp:2", "exp:1"};
    cfg.n = 2000;
    cfg.seed = 31;
    cfg.bins = 40;
    cfg.out_prefix = "cli_h_";
    std::ostringstream sink;
    REQUIRE(ocnid::run_sample(cfg, sink, sink) == 0);

    std::ifstream in("cli_h_hist.csv");
    std::string line;
    std::getline(in, line);  // header
    // component -> (lefts, densities)
    std::map<int, std::vector<std::pair<double, double>>> per_comp;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string comp, bin, left, count, density;
        std::getline(ss, comp, ',');
        std::getline(ss, bin, ',');
        std::getline(ss, left, ',');
        std::getline(ss, count, ',');
        std::getline(ss, density, ',');
        if (bin == "underflow" || bin == "overflow") continue;
        per_comp[std::stoi(comp)].emplace_back(std::stod(left), std::stod(density));
    }
    REQUIRE(per_comp.size() == 2);
    for (auto& [comp, bins] : per_comp) {
        REQUIRE(bins.size() == 40);
        double width = bins[1].first - bins[0].first;
        double integral = 0.0;
        for (auto& [left, density] : bins) integral += density * width;
        CHECK(integral == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("bct-only suppresses the per-draw tables", "[cli]") {
    std::remove("cli_c_draws.csv");
    std::remove("cli_c_hist.csv");
    ocnid::SampleConfig cfg;
    cfg.dist_specs = {"exp:2", "exp:1"};
    cfg.n = 50;
    cfg.seed = 3;
    cfg.bct_only = true;
    cfg.out_prefix = "cli_c_";
    std::ostringstream sink;
    REQUIRE(ocnid::run_sample(cfg, sink, sink) == 0);
    CHECK(exists("cli_c_summary.json"));
    CHECK_FALSE(exists("cli_c_draws.csv"));
    CHECK_FALSE(exists("cli_c_hist.csv"));
}

TEST_CASE("configuration errors exit with code 2", "[cli]") {
    std::ostringstream sink;

    ocnid::SampleConfig mismatch;
    mismatch.dist_specs = {"exp:1", "cauchy:1"};
    mismatch.out_prefix = "cli_e_";
    CHECK(ocnid::run_sample(mismatch, sink, sink) == 2);

    ocnid::SampleConfig bad_spec;
    bad_spec.dist_specs = {"exp:zero"};
    bad_spec.out_prefix = "cli_e_";
    CHECK(ocnid::run_sample(bad_spec, sink, sink) == 2);

    ocnid::SampleConfig bad_eps;
    bad_eps.dist_specs = {"exp:1"};
    bad_eps.eps = -1.0;
    bad_eps.out_prefix = "cli_e_";
    CHECK(ocnid::run_sample(bad_eps, sink, sink) == 2);

    ocnid::SampleConfig none;
    none.out_prefix = "cli_e_";
    CHECK(ocnid::run_sample(none, sink, sink) == 2);

    ocnid::OracleConfig bad_oracle;
    bad_oracle.dist_specs = {"exp:1", "badfamily:2"};
    bad_oracle.out_prefix = "cli_e_";
    CHECK(ocnid::run_oracle(bad_oracle, sink, sink) == 2);

    ocnid::BpcaConfig both;
    both.data_path = "whatever.csv";
    both.simulate = "paper8";
    both.out_prefix = "cli_e_";
    CHECK(ocnid::run_bpca(both, sink, sink) == 2);

    ocnid::BpcaConfig neither;
    neither.out_prefix = "cli_e_";
    CHECK(ocnid::run_bpca(neither, sink, sink) == 2);

    ocnid::BpcaConfig unknown_sim;
    unknown_sim.simulate = "paper9";
    unknown_sim.out_prefix = "cli_e_";
    CHECK(ocnid::run_bpca(unknown_sim, sink, sink) == 2);
}

TEST_CASE("missing data file exits with code 3", "[cli]") {
    std::ostringstream sink;
    ocnid::BpcaConfig cfg;
    cfg.data_path = "definitely_not_here.csv";
    cfg.out_prefix = "cli_e_";
    CHECK(ocnid::run_bpca(cfg, sink, sink) == 3);
}

TEST_CASE("non-coalescence exits with code 4", "[cli]") {
    std::ostringstream sink;
    ocnid::SampleConfig cfg;
    cfg.dist_specs = {"exp:8", "exp:6", "exp:4", "exp:2"};
    cfg.eps = 1e-300;
    cfg.max_n = 3;
    cfg.n = 5;
    cfg.out_prefix = "cli_e_";
    CHECK(ocnid::run_sample(cfg, sink, sink) == 4);
}

TEST_CASE("oracle command reports acceptance and writes ordered draws", "[cli]") {
    ocnid::OracleConfig cfg;
    cfg.dist_specs = {"exp:1", "exp:1"};
    cfg.n = 4000;
    cfg.seed = 17;
    cfg.out_prefix = "cli_o_";
    std::ostringstream out, sink;
    REQUIRE(ocnid::run_oracle(cfg, out, sink) == 0);
    REQUIRE(exists("cli_o_oracle_draws.csv"));
    nlohmann::json j = nlohmann::json::parse(slurp("cli_o_oracle_summary.json"));
    CHECK(j["n_draws"] == 4000);
    double rate = j["acceptance_rate"].get<double>();
    CHECK(rate > 0.45);
    CHECK(rate < 0.55);
    std::string draws = slurp("cli_o_oracle_draws.csv");
    CHECK(count_lines(draws) == 4001);
}

TEST_CASE("bpca command scans a CSV data matrix", "[cli]") {
    // Deterministic synthetic matrix with one strong direction.
    {
        std::ofstream data("cli_d_data.csv");
        data << "v1,v2,v3\n";  // header line must be tolerated
        std::mt19937_64 eng = ocnid::make_substream(5150, 0);
        ocnid::GaussianSource gauss(eng);
        for (int i = 0; i < 60; ++i) {
            double z = gauss();
            data << 3.0 * z + 0.3 * gauss() << "," << 2.0 * z + 0.3 * gauss() << ","
                 << 0.4 * gauss() << "\n";
        }
    }
    ocnid::BpcaConfig cfg;
    cfg.data_path = "cli_d_data.csv";
    cfg.n = 400;
    cfg.eps = 1e-3;
    cfg.seed = 9;
    cfg.out_prefix = "cli_d_";
    std::ostringstream out, sink;
    REQUIRE(ocnid::run_bpca(cfg, out, sink) == 0);
    REQUIRE(exists("cli_d_scan.csv"));

    nlohmann::json j = nlohmann::json::parse(slurp("cli_d_bpca.json"));
    REQUIRE(j["rows"].size() == 2);  // q = 1, 2
    CHECK(j["d"] == 3);
    CHECK(j["n"] == 60);
    CHECK(j["chosen_q"].contains("bic"));
    CHECK(j["chosen_q"].contains("laplace_literal"));
    CHECK(j["chosen_q"].contains("laplace_corrected"));
    int bic_q = j["chosen_q"]["bic"].get<int>();
    CHECK(bic_q >= 1);
    CHECK(bic_q <= 2);

    // Determinism of the full pipeline.
    cfg.out_prefix = "cli_d2_";
    REQUIRE(ocnid::run_bpca(cfg, out, sink) == 0);
    CHECK(slurp("cli_d_scan.csv") == slurp("cli_d2_scan.csv"));
}

TEST_CASE("bpca command scans the built-in simulated data set", "[cli]") {
    ocnid::BpcaConfig cfg;
    cfg.simulate = "paper8";
    cfg.n = 60;  // small scan: exercises the path, not the statistics
    cfg.eps = 1e-2;
    cfg.seed = 4;
    cfg.out_prefix = "cli_s_";
    std::ostringstream out, sink;
    REQUIRE(ocnid::run_bpca(cfg, out, sink) == 0);
    nlohmann::json j = nlohmann::json::parse(slurp("cli_s_bpca.json"));
    CHECK(j["d"] == 8);
    CHECK(j["n"] == 100);
    REQUIRE(j["rows"].size() == 7);  // q = 1..7
    CHECK(j["eigenvalues"].size() == 8);
}

TEST_CASE("csv reader accepts headers and rejects corruption", "[cli]") {
    {
        std::ofstream f("cli_r_ok.csv");
        f << "a,b\r\n1.5,2.5\n\n3.5, 4.5\n";
    }
    auto m = ocnid::read_csv_matrix("cli_r_ok.csv");
    REQUIRE(m.size() == 2);
    CHECK(m[0] == std::vector<double>{1.5, 2.5});
    CHECK(m[1] == std::vector<double>{3.5, 4.5});

    {
        std::ofstream f("cli_r_ragged.csv");
        f << "1,2\n3\n";
    }
    CHECK_THROWS_AS(ocnid::read_csv_matrix("cli_r_ragged.csv"), std::runtime_error);

    {
        std::ofstream f("cli_r_text.csv");
        f << "1,2\n3,oops\n";
    }
    CHECK_THROWS_AS(ocnid::read_csv_matrix("cli_r_text.csv"), std::runtime_error);

    {
        std::ofstream f("cli_r_empty.csv");
        f << "just,a,header\n";
    }
    CHECK_THROWS_AS(ocnid::read_csv_matrix("cli_r_empty.csv"), std::runtime_error);
}
