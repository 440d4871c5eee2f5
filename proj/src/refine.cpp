#include "stripcap/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace stripcap {

namespace {

/// Segment indices ordered by descending |sigma| in one column, ties by
/// lower index, truncated to `quota`.
void take_top(const Mesh& mesh, const Eigen::MatrixXd& sigma, int col, int quota,
              std::set<int>& out) {
    std::vector<int> order(mesh.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(sigma(a, col)) > std::abs(sigma(b, col));
    });
    quota = std::min(quota, mesh.size());
    out.insert(order.begin(), order.begin() + quota);
}

struct SolveOutput {
    Eigen::MatrixXd sigma;
    CapacitanceMatrix cap;
};

SolveOutput solve_mesh(const Mesh& mesh, int threads) {
    SystemMatrix S = assemble(mesh, threads);
    ChargeSolution sol = solve(S, build_excitation(mesh));
    CapacitanceMatrix cap = extract_capacitance(mesh, sol);
    return {std::move(sol.sigma), std::move(cap)};
}

}  // namespace

std::vector<int> uniform_plan(const std::vector<BoundaryEdge>& edges, double t, int n) {
    if (t <= 0.0 || n < 1) throw std::invalid_argument("uniform_plan: t > 0 and n >= 1 required");
    double target = t / n;
    std::vector<int> plan;
    plan.reserve(edges.size());
    for (const auto& e : edges) {
        // Tolerant ceil: an edge that is an exact multiple of the target must
        // not gain a segment when rounding pushes the ratio one ulp past the
        // integer (e.g. after a global rescale of the geometry).
        double ratio = e.length() / target;
        plan.push_back(std::max(1, static_cast<int>(std::ceil(ratio * (1.0 - 1e-12)))));
    }
    return plan;
}

std::vector<int> initial_plan(const std::vector<BoundaryEdge>& edges) {
    std::vector<int> plan;
    plan.reserve(edges.size());
    for (const auto& e : edges) plan.push_back(e.vertical() ? 3 : 40);
    return plan;
}

std::vector<int> select_top25(const Mesh& mesh, const Eigen::MatrixXd& sigma) {
    int quota = static_cast<int>(std::ceil(0.25 * mesh.size()));
    std::set<int> picked;
    take_top(mesh, sigma, 0, quota, picked);
    return {picked.begin(), picked.end()};
}

std::vector<int> select_method1(const Mesh& mesh, const Eigen::MatrixXd& sigma,
                                double k_percent) {
    if (k_percent <= 0.0 || k_percent > 100.0)
        throw std::invalid_argument("select_method1: k must be in (0, 100]");
    int cols = static_cast<int>(sigma.cols());
    int quota = static_cast<int>(std::ceil(k_percent / cols / 100.0 * mesh.size()));
    std::set<int> picked;
    for (int c = 0; c < cols; ++c) take_top(mesh, sigma, c, quota, picked);
    return {picked.begin(), picked.end()};
}

ConvergenceReport converge(const StructureSpec& spec, const RefinementConfig& config,
                           int threads) {
    if (config.tol <= 0.0 || config.tol >= 1.0)
        throw std::invalid_argument("converge: tol must be in (0, 1)");
    if (config.max_iterations < 1)
        throw std::invalid_argument("converge: at least one iteration required");

    ConvergenceReport report;
    auto edges = build_geometry(spec);

    if (config.strategy == Strategy::Uniform) {
        Mesh mesh = discretize(edges, uniform_plan(edges, spec.thickness, config.uniform_n),
                               spec);
        SolveOutput out = solve_mesh(mesh, threads);
        report.history.push_back({mesh.size(), out.cap.C.norm(), 0.0});
        report.final_c = std::move(out.cap);
        report.final_c.method = "uniform";
        report.final_mesh = std::move(mesh);
        report.converged = true;
        report.iterations = 0;
        return report;
    }

    Mesh mesh = discretize(edges, initial_plan(edges), spec);
    SolveOutput out = solve_mesh(mesh, threads);
    Eigen::MatrixXd c_prev = out.cap.C;
    report.history.push_back({mesh.size(), c_prev.norm(), 0.0});

    for (int it = 1; it <= config.max_iterations; ++it) {
        std::vector<int> ids = config.strategy == Strategy::AdaptiveTop25
                                   ? select_top25(mesh, out.sigma)
                                   : select_method1(mesh, out.sigma, config.k_percent);
        mesh = refine(mesh, ids);
        out = solve_mesh(mesh, threads);
        double rel = (out.cap.C - c_prev).norm() / c_prev.norm();
        report.history.push_back({mesh.size(), out.cap.C.norm(), rel});
        report.iterations = it;
        c_prev = out.cap.C;
        if (rel <= config.tol) {
            report.converged = true;
            break;
        }
    }

    report.final_c = std::move(out.cap);
    report.final_c.method =
        config.strategy == Strategy::AdaptiveTop25 ? "adaptive-top25" : "method-1";
    report.final_mesh = std::move(mesh);
    return report;
}

double delta_c_percent(double prev, double curr) {
    if (curr == 0.0) throw std::invalid_argument("delta_c: zero reference value");
    return 100.0 * std::abs(prev - curr) / std::abs(curr);
}

double delta_f_percent(const Eigen::MatrixXd& prev, const Eigen::MatrixXd& curr) {
    if (prev.rows() != curr.rows() || prev.cols() != curr.cols())
        throw std::invalid_argument("delta_f: dimension mismatch");
    double denom = curr.norm();
    if (denom == 0.0) throw std::invalid_argument("delta_f: zero reference norm");
    return 100.0 * (prev - curr).norm() / denom;
}

}  // namespace stripcap
