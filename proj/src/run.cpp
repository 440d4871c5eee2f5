#include <chrono>
#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "stripcap/config.hpp"
#include "stripcap/io.hpp"
#include "stripcap/physicality.hpp"

namespace stripcap {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void print_summary(const CapacitanceMatrix& cap, const PhysicalityReport& report,
                   double elapsed) {
    std::printf("N = %d segments, N_C = %d conductors, method = %s\n", cap.mesh_size,
                static_cast<int>(cap.C.rows()), cap.method.c_str());
    std::printf("C11 = %.4g pF/m\n", cap.C(0, 0) * 1e12);
    std::printf("physical: %s", report.physical() ? "yes" : "no");
    if (!report.sign_ok) std::printf("  [positive off-diagonals: %zu]", report.sign_violations.size());
    if (!report.diagonally_dominant)
        std::printf("  [dominance violations: %zu]", report.dominance_violations.size());
    if (!report.monotone_decay_ok)
        std::printf("  [decay violations: %zu]", report.decay_violations.size());
    std::printf("\nelapsed: %.2f s\n", elapsed);
}

int finish(const RunConfig& config, const PhysicalityReport& report) {
    if (config.fail_on_nonphysical && !report.physical()) return 2;
    return 0;
}

int run_solve(const RunConfig& config) {
    auto start = Clock::now();
    auto edges = build_geometry(config.structure);
    auto plan = config.segmentation.uniform
                    ? uniform_plan(edges, config.structure.thickness, config.segmentation.n)
                    : initial_plan(edges);
    Mesh mesh = discretize(edges, plan, config.structure);
    SystemMatrix S = assemble(mesh, config.threads);
    ChargeSolution sol = solve(S, build_excitation(mesh));
    CapacitanceMatrix cap = extract_capacitance(mesh, sol);
    cap.method = config.segmentation.uniform ? "uniform" : "initial";
    PhysicalityReport report = audit(cap.C);
    double elapsed = seconds_since(start);

    io::write_matrix_csv(config.output_dir / "capacitance.csv", cap.C);
    io::write_json(config.output_dir / "report.json", io::report_json(cap, report, elapsed));
    print_summary(cap, report, elapsed);
    return finish(config, report);
}

int run_converge(const RunConfig& config) {
    auto start = Clock::now();
    ConvergenceReport report = converge(config.structure, config.refinement, config.threads);
    PhysicalityReport phys = audit(report.final_c.C);
    double elapsed = seconds_since(start);

    io::write_matrix_csv(config.output_dir / "capacitance.csv", report.final_c.C);
    auto j = io::convergence_json(report);
    j["audit"] = io::audit_json(phys);
    j["elapsed_seconds"] = elapsed;
    io::write_json(config.output_dir / "convergence.json", j);
    if (!report.converged)
        std::printf("warning: not converged after %d iterations\n", report.iterations);
    print_summary(report.final_c, phys, elapsed);
    return finish(config, phys);
}

int run_sweep(const RunConfig& config) {
    SweepPlan plan = make_sweep_plan(config);
    std::vector<const SweepResult*> timing_rows;
    SweepResult r1, r2;
    PhysicalityReport last_audit;

    auto dump_points = [&](const SweepResult& r, const std::string& tag) {
        for (size_t i = 0; i < r.per_point.size(); ++i)
            io::write_matrix_csv(
                config.output_dir / ("c_" + tag + "_point" + std::to_string(i) + ".csv"),
                r.per_point[i].C);
    };

    bool want1 = config.method == "1" || config.method == "both";
    bool want2 = config.method == "2" || config.method == "both";
    nlohmann::json summary;
    if (want1) {
        r1 = run_method1(plan, config.refinement, config.threads);
        dump_points(r1, "method1");
        io::write_mask_pbm(config.output_dir / "mask.pbm", r1.mask);
        timing_rows.push_back(&r1);
        summary["method1"] = io::sweep_json(r1);
        last_audit = audit(r1.per_point.back().C);
    }
    if (want2) {
        r2 = run_method2(plan, config.refinement, config.threads);
        dump_points(r2, "method2");
        timing_rows.push_back(&r2);
        summary["method2"] = io::sweep_json(r2);
        if (!want1) last_audit = audit(r2.per_point.back().C);
    }
    if (want1 && want2) {
        SweepComparison cmp = compare(r1, r2);
        summary["savings_percent"] = cmp.savings_percent;
        summary["max_rel_frobenius"] = cmp.max_rel_frobenius;
        std::printf("savings: %.1f%%, max per-point |dC|_F: %.3g\n", cmp.savings_percent,
                    cmp.max_rel_frobenius);
    }
    io::write_timing_csv(config.output_dir / "timings.csv", timing_rows);
    io::write_json(config.output_dir / "sweep.json", summary);

    const SweepResult& shown = want1 ? r1 : r2;
    print_summary(shown.per_point.back(), last_audit, shown.t_tot());
    return finish(config, last_audit);
}

int run_audit(const RunConfig& config) {
    const AuditConfig& a = *config.audit;
    Eigen::MatrixXd m = io::read_matrix_csv(a.csv);
    PhysicalityReport report;
    if (a.first_row_only || m.rows() == 1) {
        report = audit_first_row(Eigen::VectorXd(m.row(0).transpose()), a.sym_tol);
    } else {
        report = audit(m, a.sym_tol);
    }
    io::write_json(config.output_dir / "audit.json", io::audit_json(report));
    std::printf("audit of %s: %s\n", a.csv.string().c_str(),
                report.physical() ? "physical" : "NOT physical");
    for (auto [i, j] : report.sign_violations)
        std::printf("  positive off-diagonal C(%d,%d)\n", i + 1, j + 1);
    for (int i : report.dominance_violations)
        std::printf("  row %d not diagonally dominant\n", i + 1);
    for (auto [i, j] : report.decay_violations)
        std::printf("  |C(%d,%d)| exceeds the inner neighbour\n", i + 1, j + 1);
    return finish(config, report);
}

int run_diffmask(const RunConfig& config) {
    SweepPlan plan = make_sweep_plan(config);
    if (plan.points() < 2) throw ConfigError("diffmask needs at least two sweep points");
    SweepPlan two = plan;
    for (auto& p : two.parameters) p.values.resize(2);

    // Method-I front end: pre-solve refinement on the full plan, then the two
    // adjacent assemblies and their mask.
    SweepResult r = run_method1(two, config.refinement, config.threads);
    io::write_mask_pbm(config.output_dir / "mask.pbm", r.mask);
    double changed = static_cast<double>(r.mask.count()) /
                     (static_cast<double>(r.mask.rows()) * r.mask.cols());
    io::write_json(config.output_dir / "mask.json",
                   {{"size", r.mask.rows()},
                    {"changed_fraction", changed},
                    {"unchanged_fraction", 1.0 - changed}});
    std::printf("mask %ldx%ld: %.1f%% changed, %.1f%% unchanged\n",
                static_cast<long>(r.mask.rows()), static_cast<long>(r.mask.cols()),
                100.0 * changed, 100.0 * (1.0 - changed));
    return 0;
}

}  // namespace

int run(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + config.output_dir.string());
    switch (config.mode) {
        case Mode::Solve: return run_solve(config);
        case Mode::Converge: return run_converge(config);
        case Mode::Sweep: return run_sweep(config);
        case Mode::Audit: return run_audit(config);
        case Mode::DiffMask: return run_diffmask(config);
    }
    return 1;
}

}  // namespace stripcap
