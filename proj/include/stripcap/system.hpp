#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "stripcap/geometry.hpp"

namespace stripcap {

inline constexpr double kEps0 = 8.8541878128e-12;  // F/m

/// Dense influence matrix; rows and columns follow mesh segment order.
struct SystemMatrix {
    Eigen::MatrixXd S;
    int size() const { return static_cast<int>(S.rows()); }
};

/// N x N_C matrix of unit drives: row i of a conductor-j segment has 1 in
/// column j; reference-conductor and dielectric rows are all zero.
struct ExcitationMatrix {
    Eigen::MatrixXd V;
};

struct ChargeSolution {
    Eigen::MatrixXd sigma;  // total surface charge density, one column per drive
    double residual = 0.0;  // ||S sigma - V||_F / ||V||_F
};

struct CapacitanceMatrix {
    Eigen::MatrixXd C;  // F/m
    int mesh_size = 0;
    std::string method;
};

using ChangeMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

/// Influence of source segment j on observation segment i: the potential
/// kernel on conductor rows, the normal-field kernel plus the permittivity
/// jump term on dielectric rows. Both full and partial assembly go through
/// this function so recomputed entries are bit-identical.
double system_entry(const Mesh& mesh, int i, int j);

/// threads = 0 picks the hardware concurrency. The row partition is fixed by
/// the thread count and every entry is written exactly once, so the result
/// does not depend on scheduling.
SystemMatrix assemble(const Mesh& mesh, int threads = 1);

ExcitationMatrix build_excitation(const Mesh& mesh);

/// Direct dense solve with partial pivoting. Throws SolveError when the
/// relative residual exceeds 1e-10 (degenerate geometry).
ChargeSolution solve(const SystemMatrix& S, const ExcitationMatrix& V);

/// Maxwell matrix: free charge per driven volt, with sigma_S = eps_r sigma_T
/// on conductor faces.
CapacitanceMatrix extract_capacitance(const Mesh& mesh, const ChargeSolution& sol);

/// Exact bitwise comparison; unchanged segments reproduce bit-identical
/// entries because the same closed-form arithmetic runs on identical inputs.
ChangeMask diff_mask(const SystemMatrix& a, const SystemMatrix& b);

SystemMatrix partial_reassemble(const SystemMatrix& base, const Mesh& mesh_new,
                                const ChangeMask& mask, int threads = 1);

}  // namespace stripcap
