#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "stripcap/refine.hpp"

using namespace stripcap;

namespace {

struct Solved {
    Mesh mesh;
    Eigen::MatrixXd sigma;
};

Solved solve_initial(const StructureSpec& spec) {
    auto edges = build_geometry(spec);
    Mesh mesh = discretize(edges, initial_plan(edges), spec);
    ChargeSolution sol = solve(assemble(mesh), build_excitation(mesh));
    return {std::move(mesh), std::move(sol.sigma)};
}

}  // namespace

TEST_CASE("uniform plan: ceil(edge length / (t/n)), robust to ulp noise") {
    auto spec = StructureSpec::mplp1(2, 0.005e-3);
    auto edges = build_geometry(spec);
    auto plan = uniform_plan(edges, spec.thickness, 3);
    REQUIRE(plan.size() == edges.size());
    for (size_t e = 0; e < edges.size(); ++e) {
        double ratio = edges[e].length() / (spec.thickness / 3.0);
        // Exact multiples must not round up: w / (t/3) = 30 even though the
        // division lands one ulp above the integer.
        int expect = std::max(1, static_cast<int>(std::ceil(ratio * (1.0 - 1e-12))));
        CHECK(plan[e] == expect);
        CHECK(plan[e] <= static_cast<int>(std::ceil(ratio)));
        CHECK(plan[e] + 1 >= ratio);
    }
    int conductor_top = plan[4];  // first signal-conductor edge (top, width w)
    CHECK(conductor_top == 30);
    CHECK_THROWS(uniform_plan(edges, 0.0, 3));
}

TEST_CASE("initial plan: 3 on vertical edges, 40 on horizontal") {
    auto spec = StructureSpec::mplp1(2, 0.005e-3);
    auto edges = build_geometry(spec);
    auto plan = initial_plan(edges);
    for (size_t e = 0; e < edges.size(); ++e) CHECK(plan[e] == (edges[e].vertical() ? 3 : 40));
}

TEST_CASE("select_top25 picks the ceil(N/4) largest charges of column 0") {
    Solved s = solve_initial(StructureSpec::mplp1(2, 0.02e-3));
    auto picked = select_top25(s.mesh, s.sigma);
    int quota = static_cast<int>(std::ceil(0.25 * s.mesh.size()));
    REQUIRE(static_cast<int>(picked.size()) == quota);
    CHECK(std::is_sorted(picked.begin(), picked.end()));
    // No unpicked segment may carry strictly more charge than a picked one.
    double min_picked = 1e300;
    for (int id : picked) min_picked = std::min(min_picked, std::abs(s.sigma(id, 0)));
    for (int i = 0; i < s.mesh.size(); ++i) {
        if (std::binary_search(picked.begin(), picked.end(), i)) continue;
        CHECK(std::abs(s.sigma(i, 0)) <= min_picked);
    }
}

TEST_CASE("select_method1 cardinality bounds and k = 100 cap") {
    Solved s = solve_initial(StructureSpec::mplp1(3, 0.02e-3));
    const int n = s.mesh.size();
    const int cols = static_cast<int>(s.sigma.cols());
    for (double k : {25.0, 75.0, 100.0}) {
        auto picked = select_method1(s.mesh, s.sigma, k);
        int quota = static_cast<int>(std::ceil(k / cols / 100.0 * n));
        CHECK(static_cast<int>(picked.size()) >= quota);
        CHECK(static_cast<int>(picked.size()) <= std::min(n, cols * quota));
        CHECK(std::is_sorted(picked.begin(), picked.end()));
        CHECK(std::adjacent_find(picked.begin(), picked.end()) == picked.end());
    }
    CHECK_THROWS(select_method1(s.mesh, s.sigma, 0.0));
    CHECK_THROWS(select_method1(s.mesh, s.sigma, 101.0));
}

TEST_CASE("converge, uniform strategy: a single solve on the t/n plan") {
    auto spec = StructureSpec::mplp1(2, 0.05e-3);
    RefinementConfig cfg;
    cfg.strategy = Strategy::Uniform;
    cfg.uniform_n = 1;
    ConvergenceReport r = converge(spec, cfg);
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.history.size() == 1);
    CHECK(r.final_c.C.rows() == 2);
    CHECK(r.final_c.method == "uniform");
}

TEST_CASE("converge, method I: K stabilizes within tolerance") {
    auto spec = StructureSpec::mplp1(2, 0.05e-3);
    RefinementConfig cfg;  // method1, k = 75, tol = 0.01
    ConvergenceReport r = converge(spec, cfg);
    CHECK(r.converged);
    REQUIRE(r.history.size() >= 2);
    CHECK(r.history.back().rel_change <= cfg.tol);
    // Mesh only ever grows, and K stays a sane capacitance norm.
    for (size_t i = 1; i < r.history.size(); ++i)
        CHECK(r.history[i].mesh_size > r.history[i - 1].mesh_size);
    CHECK(r.final_c.C(0, 0) > 0.0);
    CHECK(r.final_mesh.size() == r.history.back().mesh_size);
    CHECK(r.final_c.method == "method-1");
}

TEST_CASE("converge respects the iteration budget") {
    auto spec = StructureSpec::mplp1(2, 0.05e-3);
    RefinementConfig cfg;
    cfg.tol = 1e-9;  // unreachable
    cfg.max_iterations = 2;
    ConvergenceReport r = converge(spec, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 2);
    CHECK(r.history.size() == 3);
}

TEST_CASE("delta metrics") {
    CHECK(delta_c_percent(99.0, 100.0) == doctest::Approx(1.0));
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd b = a * 1.02;
    CHECK(delta_f_percent(a, b) == doctest::Approx(100.0 * (a - b).norm() / b.norm()));
    CHECK_THROWS(delta_c_percent(1.0, 0.0));
    CHECK_THROWS(delta_f_percent(a, Eigen::MatrixXd::Zero(3, 3)));
}
