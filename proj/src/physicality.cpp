#include "stripcap/physicality.hpp"

#include <cmath>
#include <stdexcept>

namespace stripcap {

namespace {

/// Checks |C(i, j)| non-increasing as |j - i| grows, walking outward from the
/// diagonal on both sides of row i.
void check_row_decay(const Eigen::MatrixXd& c, int i, PhysicalityReport& report) {
    int n = static_cast<int>(c.cols());
    for (int j = i + 2; j < n; ++j)
        if (std::abs(c(i, j)) > std::abs(c(i, j - 1)))
            report.decay_violations.emplace_back(i, j);
    for (int j = i - 2; j >= 0; --j)
        if (std::abs(c(i, j)) > std::abs(c(i, j + 1)))
            report.decay_violations.emplace_back(i, j);
}

}  // namespace

PhysicalityReport audit(const Eigen::MatrixXd& c, double sym_tol) {
    if (c.rows() != c.cols()) throw std::invalid_argument("audit: matrix must be square");
    const int n = static_cast<int>(c.rows());
    const double scale = c.cwiseAbs().maxCoeff();
    const double slack = sym_tol * scale;

    PhysicalityReport report;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            report.max_asymmetry = std::max(report.max_asymmetry, std::abs(c(i, j) - c(j, i)));
    if (scale > 0.0) report.max_asymmetry /= scale;
    report.symmetric = report.max_asymmetry <= sym_tol;

    for (int i = 0; i < n; ++i) {
        double off_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            off_sum += std::abs(c(i, j));
            if (c(i, j) > slack) report.sign_violations.emplace_back(i, j);
        }
        if (off_sum > c(i, i)) report.dominance_violations.push_back(i);
        check_row_decay(c, i, report);
    }
    report.sign_ok = report.sign_violations.empty();
    report.diagonally_dominant = report.dominance_violations.empty();
    report.monotone_decay_ok = report.decay_violations.empty();
    return report;
}

PhysicalityReport audit_first_row(const Eigen::VectorXd& row, double sym_tol) {
    const int n = static_cast<int>(row.size());
    if (n < 1) throw std::invalid_argument("audit_first_row: empty row");
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    c.diagonal().setConstant(row(0));
    c.row(0) = row.transpose();
    // Only row 0 carries data; restrict every check to it.
    PhysicalityReport report;
    report.symmetry_checked = false;
    const double scale = row.cwiseAbs().maxCoeff();
    const double slack = sym_tol * scale;
    double off_sum = 0.0;
    for (int j = 1; j < n; ++j) {
        off_sum += std::abs(row(j));
        if (row(j) > slack) report.sign_violations.emplace_back(0, j);
    }
    if (off_sum > row(0)) report.dominance_violations.push_back(0);
    check_row_decay(c, 0, report);
    report.sign_ok = report.sign_violations.empty();
    report.diagonally_dominant = report.dominance_violations.empty();
    report.monotone_decay_ok = report.decay_violations.empty();
    return report;
}

}  // namespace stripcap
