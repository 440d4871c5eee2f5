#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace stripcap {

/// Physical-validity audit of a Maxwell capacitance matrix. Conductor indices
/// are assumed to follow spatial order along the coupled array; the monotone
/// decay check (d) is a structure-specific heuristic for such arrays and is
/// reported separately from (a)-(c).
struct PhysicalityReport {
    bool symmetry_checked = true;  // false for first-row audits
    bool symmetric = true;
    double max_asymmetry = 0.0;    // max |C_ij - C_ji| / max |C|
    bool sign_ok = true;
    std::vector<std::pair<int, int>> sign_violations;   // 0-based (i, j)
    bool diagonally_dominant = true;
    std::vector<int> dominance_violations;              // 0-based rows
    bool monotone_decay_ok = true;
    std::vector<std::pair<int, int>> decay_violations;  // |C_ij| grew vs the inner neighbor

    bool physical() const {
        return (symmetric || !symmetry_checked) && sign_ok && diagonally_dominant &&
               monotone_decay_ok;
    }
};

/// Full-matrix audit. Off-diagonal sign checks allow +sym_tol * max|C| of
/// slack for rounded fixture data; pass sym_tol = 0 for exact checks.
PhysicalityReport audit(const Eigen::MatrixXd& c, double sym_tol = 1e-3);

/// Audit of a first matrix row on its own (symmetry check skipped).
PhysicalityReport audit_first_row(const Eigen::VectorXd& row, double sym_tol = 1e-3);

}  // namespace stripcap
