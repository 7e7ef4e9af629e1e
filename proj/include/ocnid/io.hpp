#pragma once

// File formats for the command-line front end: CSV tables for draws,
// histograms and scan rows, JSON for run summaries, and a permissive CSV
// reader for input data matrices. All numeric output uses %.17g so reruns
// with the same seed are byte-identical and values round-trip exactly.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ocnid/bpca.hpp"
#include "ocnid/cftp.hpp"
#include "ocnid/oracle.hpp"
#include "ocnid/stats.hpp"

namespace ocnid {

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

}  // namespace detail

inline void write_draws_csv(const std::string& path, const std::vector<PerfectDraw>& draws,
                            std::size_t m) {
    std::ofstream out = detail::open_output(path);
    for (std::size_t i = 1; i <= m; ++i) out << "x_" << i << ",";
    out << "bct,gap\n";
    for (const auto& d : draws) {
        for (double v : d.values) out << format_value(v) << ",";
        out << d.bct << "," << format_value(d.gap) << "\n";
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

inline void write_matrix_csv(const std::string& path,
                             const std::vector<std::vector<double>>& rows, std::size_t m) {
    std::ofstream out = detail::open_output(path);
    for (std::size_t i = 1; i <= m; ++i) out << "x_" << i << (i == m ? "\n" : ",");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_value(row[i]) << (i + 1 == row.size() ? "\n" : ",");
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

// One table for all components: component index, bin left edge, count,
// density (normalized over the in-range count), plus per-component
// under/overflow rows flagged in the `bin` column.
inline void write_histograms_csv(const std::string& path, const std::vector<Histogram>& hists) {
    std::ofstream out = detail::open_output(path);
    out << "component,bin,left,count,density\n";
    for (std::size_t c = 0; c < hists.size(); ++c) {
        const Histogram& h = hists[c];
        for (std::size_t b = 0; b < h.bins.size(); ++b) {
            out << (c + 1) << "," << b << "," << format_value(h.bins[b].left) << ","
                << h.bins[b].count << "," << format_value(h.bins[b].density) << "\n";
        }
        out << (c + 1) << ",underflow," << format_value(-kInf) << "," << h.underflow << ",0\n";
        out << (c + 1) << ",overflow," << format_value(h.hi) << "," << h.overflow << ",0\n";
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

inline nlohmann::json summary_to_json(const BatchSummary& s) {
    return nlohmann::json{{"mean_bct", s.mean_bct}, {"min_bct", s.min_bct},
                          {"max_bct", s.max_bct},   {"n_draws", s.n_draws},
                          {"epsilon", s.epsilon},   {"seed", s.seed}};
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out = detail::open_output(path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing " + path);
}

inline void write_scan_csv(const std::string& path, const std::vector<ScanRow>& rows) {
    std::ofstream out = detail::open_output(path);
    out << "q,mean_bct,min_bct,max_bct,max_log_lik,bic,laplace_literal,laplace_corrected\n";
    for (const auto& r : rows) {
        out << r.q << "," << format_value(r.mean_bct) << "," << r.min_bct << "," << r.max_bct
            << "," << format_value(r.max_log_lik) << "," << format_value(r.bic) << ","
            << format_value(r.laplace_literal) << "," << format_value(r.laplace_corrected) << "\n";
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

inline nlohmann::json scan_to_json(const std::vector<ScanRow>& rows) {
    nlohmann::json out;
    out["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json jr{{"q", r.q},
                          {"mean_bct", r.mean_bct},
                          {"min_bct", r.min_bct},
                          {"max_bct", r.max_bct},
                          {"max_log_lik", r.max_log_lik},
                          {"bic", r.bic},
                          {"laplace_literal", r.laplace_literal},
                          {"laplace_corrected", r.laplace_corrected}};
        jr["map"] = {{"sigma2", r.map.sigma2}, {"lambda", r.map.lambda}};
        out["rows"].push_back(std::move(jr));
    }
    out["chosen_q"] = {{"bic", argmax_q(rows, &ScanRow::bic)},
                       {"laplace_literal", argmax_q(rows, &ScanRow::laplace_literal)},
                       {"laplace_corrected", argmax_q(rows, &ScanRow::laplace_corrected)},
                       {"max_log_lik", argmax_q(rows, &ScanRow::max_log_lik)}};
    return out;
}

// Reads a numeric CSV matrix. A single leading header line is tolerated and
// skipped; afterwards every row must be all-numeric and rectangular.
inline std::vector<std::vector<double>> read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
            // Allow surrounding whitespace but nothing else after the number.
            while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\t')) ++used;
            if (used != cell.size()) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (header_allowed) {
                header_allowed = false;
                continue;
            }
            throw std::runtime_error("non-numeric cell in " + path + " at line " +
                                     std::to_string(lineno));
        }
        header_allowed = false;
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged row in " + path + " at line " + std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("no numeric rows in " + path);
    return rows;
}

}  // namespace ocnid
