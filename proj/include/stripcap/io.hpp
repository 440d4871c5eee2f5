#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "stripcap/physicality.hpp"
#include "stripcap/refine.hpp"
#include "stripcap/sweep.hpp"
#include "stripcap/system.hpp"

namespace stripcap::io {

/// Row-major CSV, values in pF/m, 6 significant digits.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& c_farad_per_m);

/// Reads a CSV of pF/m values back into F/m. Accepts a single row.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Mask portrait as a binary PBM, one pixel per entry, black = changed.
void write_mask_pbm(const std::filesystem::path& path, const ChangeMask& mask);

nlohmann::json report_json(const CapacitanceMatrix& cap, const PhysicalityReport& audit,
                           double elapsed_seconds);
nlohmann::json audit_json(const PhysicalityReport& report);
nlohmann::json convergence_json(const ConvergenceReport& report);
nlohmann::json sweep_json(const SweepResult& result);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Timing table CSV with one row per method: method, t_mid, t_tot, points.
void write_timing_csv(const std::filesystem::path& path,
                      const std::vector<const SweepResult*>& results);

}  // namespace stripcap::io
