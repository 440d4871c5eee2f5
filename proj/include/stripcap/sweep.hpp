#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "stripcap/refine.hpp"
#include "stripcap/system.hpp"

namespace stripcap {

struct SweepParameter {
    std::string name;            // "t", "w", "s", "eps_layer_<k>"
    std::vector<double> values;  // one per sweep point, meters / dimensionless
};

/// Declarative multivariate sweep. Parameters vary jointly (same index across
/// lists). The outer envelope is held fixed: w/s changes are compensated by
/// the edge margin, t changes are absorbed by the layer above.
struct SweepPlan {
    StructureSpec base;
    std::vector<SweepParameter> parameters;

    int points() const {
        return parameters.empty() ? 0 : static_cast<int>(parameters.front().values.size());
    }
};

struct SweepResult {
    std::string method;  // "I" or "II"
    std::vector<CapacitanceMatrix> per_point;
    std::vector<double> point_seconds;
    double presolve_seconds = 0.0;  // method I only
    double unchanged_fraction = std::numeric_limits<double>::quiet_NaN();
    ChangeMask mask;  // method I only

    double t_tot() const;
    double t_mid() const;
};

/// Called after each sweep point with its fully assembled system matrix;
/// used by verification code to compare methods bit for bit.
using PointHook = std::function<void(int point, const SystemMatrix&, const Mesh&)>;

/// nominal * (1 + p/100) for p = -span, -span+step, ..., +span.
std::vector<double> plan_from_range(double nominal, double span_percent, double step_percent);

/// The median point for equidistant value lists, else the point closest to
/// the arithmetic mean (ties to the lower index). Joint sweeps share one
/// pre-solve, keyed on the first parameter.
int presolve_point(const SweepPlan& plan);

/// Base spec with the sweep parameters applied at point `i` and the layout
/// re-resolved (margin compensation under the fixed envelope).
StructureSpec spec_for_point(const SweepPlan& plan, int i);

/// Fixed-refinement sweep with change-mask reuse: one pre-solve picks the
/// segments to split, the first two points are assembled fully and diffed,
/// and every later point recomputes only masked entries of the first-point
/// matrix. The mask is widened by the rows/columns/diagonals of segments
/// whose inputs read a swept parameter, which makes the partial updates
/// bit-identical to full reassembly at every point.
SweepResult run_method1(const SweepPlan& plan, const RefinementConfig& config,
                        int threads = 1, const PointHook& hook = nullptr);

/// Full reassembly at every point; the reference for both results and time.
SweepResult run_method2(const SweepPlan& plan, const RefinementConfig& config,
                        int threads = 1, const PointHook& hook = nullptr);

struct SweepComparison {
    double savings_percent = 0.0;       // (t_tot_II - t_tot_I) / t_tot_II
    double max_rel_frobenius = 0.0;     // worst per-point difference in C
};

SweepComparison compare(const SweepResult& method1, const SweepResult& method2);

}  // namespace stripcap
