#include "stripcap/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace stripcap::io {

namespace {

void require_stream(const std::ios& s, const std::filesystem::path& path, const char* op) {
    if (!s) throw std::runtime_error(std::string(op) + " failed for " + path.string());
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& c) {
    std::ofstream out(path);
    require_stream(out, path, "open");
    char buf[64];
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        for (Eigen::Index j = 0; j < c.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.6g", c(i, j) * 1e12);
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
    require_stream(out, path, "write");
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    require_stream(in, path, "open");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged CSV matrix in " + path.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty CSV matrix in " + path.string());
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j] * 1e-12;
    return m;
}

void write_mask_pbm(const std::filesystem::path& path, const ChangeMask& mask) {
    std::ofstream out(path, std::ios::binary);
    require_stream(out, path, "open");
    out << "P4\n" << mask.cols() << " " << mask.rows() << "\n";
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
        unsigned char byte = 0;
        int bit = 7;
        for (Eigen::Index j = 0; j < mask.cols(); ++j) {
            if (mask(i, j)) byte |= static_cast<unsigned char>(1u << bit);
            if (--bit < 0) {
                out.put(static_cast<char>(byte));
                byte = 0;
                bit = 7;
            }
        }
        if (bit != 7) out.put(static_cast<char>(byte));
    }
    require_stream(out, path, "write");
}

nlohmann::json audit_json(const PhysicalityReport& r) {
    auto pairs = [](const std::vector<std::pair<int, int>>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto [i, j] : v) arr.push_back({{"row", i + 1}, {"col", j + 1}});
        return arr;
    };
    nlohmann::json j{{"physical", r.physical()},
                     {"sign_ok", r.sign_ok},
                     {"sign_violations", pairs(r.sign_violations)},
                     {"diagonally_dominant", r.diagonally_dominant},
                     {"dominance_violations", r.dominance_violations},
                     {"monotone_decay_ok", r.monotone_decay_ok},
                     {"decay_violations", pairs(r.decay_violations)}};
    if (r.symmetry_checked) {
        j["symmetric"] = r.symmetric;
        j["max_asymmetry"] = r.max_asymmetry;
    }
    return j;
}

nlohmann::json report_json(const CapacitanceMatrix& cap, const PhysicalityReport& audit,
                           double elapsed_seconds) {
    return {{"mesh_size", cap.mesh_size},
            {"conductors", cap.C.rows()},
            {"method", cap.method},
            {"c11_pF_per_m", cap.C(0, 0) * 1e12},
            {"audit", audit_json(audit)},
            {"elapsed_seconds", elapsed_seconds}};
}

nlohmann::json convergence_json(const ConvergenceReport& report) {
    nlohmann::json iters = nlohmann::json::array();
    for (const auto& it : report.history)
        iters.push_back({{"mesh_size", it.mesh_size},
                         {"k_frobenius", it.k_norm},
                         {"rel_change", it.rel_change}});
    return {{"converged", report.converged},
            {"iterations", report.iterations},
            {"history", iters},
            {"final_mesh_size", report.final_mesh.size()},
            {"method", report.final_c.method}};
}

nlohmann::json sweep_json(const SweepResult& result) {
    nlohmann::json j{{"method", result.method},
                     {"points", result.per_point.size()},
                     {"t_mid_seconds", result.t_mid()},
                     {"t_tot_seconds", result.t_tot()},
                     {"presolve_seconds", result.presolve_seconds}};
    if (!std::isnan(result.unchanged_fraction))
        j["unchanged_fraction"] = result.unchanged_fraction;
    return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    require_stream(out, path, "open");
    out << j.dump(2) << "\n";
    require_stream(out, path, "write");
}

void write_timing_csv(const std::filesystem::path& path,
                      const std::vector<const SweepResult*>& results) {
    std::ofstream out(path);
    require_stream(out, path, "open");
    out << "method,points,t_mid_s,t_tot_s,presolve_s\n";
    for (const auto* r : results)
        out << r->method << "," << r->per_point.size() << "," << r->t_mid() << ","
            << r->t_tot() << "," << r->presolve_seconds << "\n";
    require_stream(out, path, "write");
}

}  // namespace stripcap::io
