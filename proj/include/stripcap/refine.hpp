#pragma once

#include <vector>

#include "stripcap/system.hpp"

namespace stripcap {

enum class Strategy { Uniform, AdaptiveTop25, MethodI };

struct RefinementConfig {
    Strategy strategy = Strategy::MethodI;
    double tol = 0.01;       // relative Frobenius change of C that stops the loop
    int max_iterations = 12;
    double k_percent = 75.0; // MethodI refinement intensity
    int uniform_n = 3;       // Uniform strategy: t/n target segment length
};

struct IterationRecord {
    int mesh_size = 0;
    double k_norm = 0.0;     // ||C||_F of this iteration
    double rel_change = 0.0; // ||C_i - C_{i-1}||_F / ||C_{i-1}||_F (0 for the first)
};

struct ConvergenceReport {
    std::vector<IterationRecord> history;
    CapacitanceMatrix final_c;
    Mesh final_mesh;
    bool converged = false;
    int iterations = 0;
};

/// seg_count = ceil(edge_length / (t/n)), at least 1, for every edge.
std::vector<int> uniform_plan(const std::vector<BoundaryEdge>& edges, double t, int n);

/// Initial sweep segmentation: 3 segments on vertical edges, 40 on horizontal.
std::vector<int> initial_plan(const std::vector<BoundaryEdge>& edges);

/// Indices of the ceil(N/4) segments with the largest |sigma_T| in the first
/// excitation column; ties broken by lower index.
std::vector<int> select_top25(const Mesh& mesh, const Eigen::MatrixXd& sigma);

/// Per excitation column, the top ceil((k/N_C)% of N) segments by |sigma_T|;
/// returns the union across columns. The per-column quota caps the union at N
/// for k = 100.
std::vector<int> select_method1(const Mesh& mesh, const Eigen::MatrixXd& sigma,
                                double k_percent);

/// Iterative refinement driver: initial 3/40 segmentation, then
/// select -> split -> solve until ||C_i - C_{i-1}||_F / ||C_{i-1}||_F drops
/// to tol or the iteration budget runs out. The Uniform strategy is a single
/// solve on the t/n plan.
ConvergenceReport converge(const StructureSpec& spec, const RefinementConfig& config,
                           int threads = 1);

/// |prev - curr| / |curr| in percent.
double delta_c_percent(double prev, double curr);

/// ||prev - curr||_F / ||curr||_F in percent.
double delta_f_percent(const Eigen::MatrixXd& prev, const Eigen::MatrixXd& curr);

}  // namespace stripcap
