#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "stripcap/refine.hpp"
#include "stripcap/sweep.hpp"

namespace stripcap {

enum class Mode { Solve, Converge, Sweep, Audit, DiffMask };

struct SegmentationConfig {
    bool uniform = false;  // false = initial 3/40 plan
    int n = 3;             // t/n target for the uniform plan
};

struct SweepRange {
    std::string name;
    double span_percent = 0.0;
    double step_percent = 0.0;
    std::optional<double> nominal;  // defaults to the base spec value
};

struct AuditConfig {
    std::filesystem::path csv;
    bool first_row_only = false;
    double sym_tol = 1e-3;
};

struct RunConfig {
    Mode mode = Mode::Solve;
    StructureSpec structure;
    SegmentationConfig segmentation;
    RefinementConfig refinement;
    std::vector<SweepRange> sweep_ranges;
    std::optional<AuditConfig> audit;
    std::filesystem::path output_dir = "out";
    std::string method = "both";  // sweep: "1", "2" or "both"
    int threads = 1;
    bool fail_on_nonphysical = false;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses and validates the JSON run configuration. Lengths in the file are
/// millimeters; unknown keys are rejected with their JSON path.
RunConfig parse_config(const std::filesystem::path& path);

/// The resolved sweep plan for a sweep/diffmask config.
SweepPlan make_sweep_plan(const RunConfig& config);

/// Executes the configured pipeline and writes the output files.
/// Returns the process exit status.
int run(const RunConfig& config);

}  // namespace stripcap
