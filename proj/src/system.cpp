#include "stripcap/system.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "stripcap/kernel.hpp"

namespace stripcap {

namespace {

const double kInvTwoPiEps0 = 1.0 / (2.0 * std::numbers::pi * kEps0);

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void run_row_partition(int rows, int threads, const std::function<void(int, int)>& body) {
    threads = std::min(threads, rows);
    if (threads <= 1) {
        body(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        int lo = static_cast<int>(static_cast<long long>(rows) * t / threads);
        int hi = static_cast<int>(static_cast<long long>(rows) * (t + 1) / threads);
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

double system_entry(const Mesh& mesh, int i, int j) {
    const Segment& obs = mesh.segments[i];
    const Segment& src = mesh.segments[j];
    if (obs.kind == BoundaryKind::ConductorDielectric) {
        // The log kernel is normalized by the layout width (potential
        // reference at r = l instead of r = 1 m). This keeps the conductor
        // rows O(1) regardless of the unit of length: unnormalized ln|r| is a
        // large near-constant for sub-millimeter geometry, which destroys the
        // conditioning of the system, and it makes C depend on the unit.
        double lref = mesh.spec.total_width;
        return -kInvTwoPiEps0 *
               (log_potential_integral(obs.mid, src) - src.length * std::log(lref));
    }
    if (i == j) {
        // Principal-value self field is zero for a straight segment; only the
        // permittivity jump term remains.
        return (obs.eps_pos + obs.eps_neg) / ((obs.eps_pos - obs.eps_neg) * 2.0 * kEps0);
    }
    return kInvTwoPiEps0 * normal_field_integral(obs.mid, obs.normal, src);
}

SystemMatrix assemble(const Mesh& mesh, int threads) {
    const int n = mesh.size();
    SystemMatrix sys;
    sys.S.resize(n, n);
    run_row_partition(n, resolve_threads(threads), [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            for (int j = 0; j < n; ++j) sys.S(i, j) = system_entry(mesh, i, j);
    });
    return sys;
}

ExcitationMatrix build_excitation(const Mesh& mesh) {
    ExcitationMatrix exc;
    exc.V = Eigen::MatrixXd::Zero(mesh.size(), mesh.conductor_count);
    for (int i = 0; i < mesh.size(); ++i) {
        int id = mesh.segments[i].conductor_id;
        if (id > 0) exc.V(i, id - 1) = 1.0;
    }
    return exc;
}

ChargeSolution solve(const SystemMatrix& S, const ExcitationMatrix& V) {
    if (S.S.rows() != S.S.cols() || S.S.rows() != V.V.rows())
        throw SolveError("system/excitation dimensions do not match");
    ChargeSolution sol;
    // Row equilibration: conductor rows scale with the geometry while
    // dielectric rows carry the O(1/eps0) jump term, so the raw system can be
    // badly row-scaled. The scaling is derived from the matrix entries alone,
    // hence bit-identical for bit-identical inputs.
    Eigen::VectorXd row_max = S.S.cwiseAbs().rowwise().maxCoeff();
    if ((row_max.array() <= 0.0).any()) throw SolveError("system matrix has an all-zero row");
    Eigen::VectorXd row_inv = row_max.cwiseInverse();
    Eigen::MatrixXd A = row_inv.asDiagonal() * S.S;
    Eigen::MatrixXd B = row_inv.asDiagonal() * V.V;
    Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>> lu(A);  // factors A in place
    sol.sigma = lu.solve(B);
    const double bnorm = B.norm();
    auto residual = [&](const Eigen::MatrixXd& sigma) {
        return Eigen::MatrixXd(row_inv.asDiagonal() * (S.S * sigma) - B);
    };
    Eigen::MatrixXd r = residual(sol.sigma);
    sol.residual = r.norm() / bnorm;
    // A few steps of iterative refinement with the stored factorization push
    // the residual to machine level even for ill-conditioned meshes.
    for (int it = 0; it < 4 && sol.residual > 1e-13; ++it) {
        Eigen::MatrixXd corrected = sol.sigma - lu.solve(r);
        Eigen::MatrixXd r_next = residual(corrected);
        double refined = r_next.norm() / bnorm;
        if (refined >= sol.residual) break;
        sol.sigma = std::move(corrected);
        r = std::move(r_next);
        sol.residual = refined;
    }
    if (!(sol.residual <= 1e-10)) {
        std::ostringstream msg;
        msg << "dense solve failed: relative residual " << sol.residual
            << " exceeds 1e-10 (singular or near-singular system, rcond "
            << lu.rcond() << ")";
        throw SolveError(msg.str());
    }
    return sol;
}

CapacitanceMatrix extract_capacitance(const Mesh& mesh, const ChargeSolution& sol) {
    CapacitanceMatrix cap;
    cap.mesh_size = mesh.size();
    cap.C = Eigen::MatrixXd::Zero(mesh.conductor_count, mesh.conductor_count);
    for (int s = 0; s < mesh.size(); ++s) {
        const Segment& seg = mesh.segments[s];
        if (seg.kind != BoundaryKind::ConductorDielectric || seg.conductor_id <= 0) continue;
        int row = seg.conductor_id - 1;
        double w = seg.eps_pos * seg.length;
        for (int j = 0; j < mesh.conductor_count; ++j) cap.C(row, j) += w * sol.sigma(s, j);
    }
    return cap;
}

ChangeMask diff_mask(const SystemMatrix& a, const SystemMatrix& b) {
    if (a.S.rows() != b.S.rows() || a.S.cols() != b.S.cols())
        throw SolveError("diff_mask: matrix dimensions drifted between sweep points");
    return a.S.array() != b.S.array();
}

SystemMatrix partial_reassemble(const SystemMatrix& base, const Mesh& mesh_new,
                                const ChangeMask& mask, int threads) {
    const int n = mesh_new.size();
    if (base.S.rows() != n || mask.rows() != n || mask.cols() != n)
        throw SolveError("partial_reassemble: dimensions do not match");
    SystemMatrix sys;
    sys.S = base.S;
    run_row_partition(n, resolve_threads(threads), [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            for (int j = 0; j < n; ++j)
                if (mask(i, j)) sys.S(i, j) = system_entry(mesh_new, i, j);
    });
    return sys;
}

}  // namespace stripcap
