#include "stripcap/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace stripcap {

namespace {

using nlohmann::json;

constexpr double kMm = 1e-3;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config error at " + where + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(where + "/" + key, "unknown key");
}

const json& need(const json& obj, const std::string& where, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, "missing required key '" + key + "'");
    return *it;
}

double need_number(const json& obj, const std::string& where, const std::string& key) {
    const json& v = need(obj, where, key);
    if (!v.is_number()) fail(where + "/" + key, "expected a number");
    return v.get<double>();
}

double opt_number(const json& obj, const std::string& key, double fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : it->get<double>();
}

StructureSpec parse_structure(const json& j) {
    const std::string where = "structure";
    reject_unknown(j, where,
                   {"family", "conductors", "t", "w", "s", "d", "widths", "gaps", "layers",
                    "ground_thickness", "total_width"});
    std::string family = need(j, where, "family").get<std::string>();

    if (family == "mplp2") {
        StructureSpec s = StructureSpec::mplp2();
        if (j.contains("t")) s.thickness = need_number(j, where, "t") * kMm;
        return resolve_layout(s);
    }

    StructureSpec s;
    if (family == "mplp1")
        s.family = Family::Mplp1;
    else if (family == "generic")
        s.family = Family::Generic;
    else
        fail(where + "/family", "expected mplp1, mplp2 or generic");

    int m = static_cast<int>(need_number(j, where, "conductors"));
    s.conductor_count = m;
    s.thickness = need_number(j, where, "t") * kMm;
    if (j.contains("widths")) {
        for (double w : need(j, where, "widths")) s.widths.push_back(w * kMm);
    } else {
        s.widths.assign(m, need_number(j, where, "w") * kMm);
    }
    if (j.contains("gaps")) {
        for (double g : need(j, where, "gaps")) s.gaps.push_back(g * kMm);
    } else if (m > 1) {
        s.gaps.assign(m - 1, need_number(j, where, "s") * kMm);
    }
    s.margin = need_number(j, where, "d") * kMm;
    const json& layers = need(j, where, "layers");
    if (!layers.is_array() || layers.empty()) fail(where + "/layers", "expected a non-empty array");
    for (size_t k = 0; k < layers.size(); ++k) {
        const std::string lw = where + "/layers/" + std::to_string(k);
        reject_unknown(layers[k], lw, {"h", "eps"});
        s.layer_heights.push_back(need_number(layers[k], lw, "h") * kMm);
        s.layer_eps.push_back(need_number(layers[k], lw, "eps"));
    }
    s.ground_thickness = opt_number(j, "ground_thickness", 0.01) * kMm;
    if (j.contains("total_width")) s.total_width = need_number(j, where, "total_width") * kMm;
    try {
        return resolve_layout(s);
    } catch (const GeometryError& e) {
        fail(where, e.what());
    }
}

SegmentationConfig parse_segmentation(const json& j) {
    const std::string where = "segmentation";
    reject_unknown(j, where, {"plan", "n"});
    SegmentationConfig seg;
    std::string plan = need(j, where, "plan").get<std::string>();
    if (plan == "uniform") {
        seg.uniform = true;
        seg.n = static_cast<int>(opt_number(j, "n", 3));
        if (seg.n < 1) fail(where + "/n", "n must be >= 1");
    } else if (plan == "initial") {
        seg.uniform = false;
    } else {
        fail(where + "/plan", "expected uniform or initial");
    }
    return seg;
}

RefinementConfig parse_refinement(const json& j) {
    const std::string where = "refinement";
    reject_unknown(j, where, {"strategy", "k", "tol", "max_iterations", "n"});
    RefinementConfig r;
    std::string strategy = need(j, where, "strategy").get<std::string>();
    if (strategy == "method1")
        r.strategy = Strategy::MethodI;
    else if (strategy == "top25")
        r.strategy = Strategy::AdaptiveTop25;
    else if (strategy == "uniform")
        r.strategy = Strategy::Uniform;
    else
        fail(where + "/strategy", "expected method1, top25 or uniform");
    r.k_percent = opt_number(j, "k", 75.0);
    r.tol = opt_number(j, "tol", 0.01);
    r.max_iterations = static_cast<int>(opt_number(j, "max_iterations", 12));
    r.uniform_n = static_cast<int>(opt_number(j, "n", 3));
    if (r.k_percent <= 0.0 || r.k_percent > 100.0) fail(where + "/k", "k must be in (0, 100]");
    if (r.tol <= 0.0 || r.tol >= 1.0) fail(where + "/tol", "tol must be in (0, 1)");
    if (r.max_iterations < 1) fail(where + "/max_iterations", "must be >= 1");
    return r;
}

std::vector<SweepRange> parse_sweep(const json& j) {
    const std::string where = "sweep";
    reject_unknown(j, where, {"parameters"});
    const json& params = need(j, where, "parameters");
    if (!params.is_array() || params.empty())
        fail(where + "/parameters", "expected a non-empty array");
    std::vector<SweepRange> ranges;
    for (size_t i = 0; i < params.size(); ++i) {
        const std::string pw = where + "/parameters/" + std::to_string(i);
        reject_unknown(params[i], pw, {"name", "span_percent", "step_percent", "nominal"});
        SweepRange r;
        r.name = need(params[i], pw, "name").get<std::string>();
        r.span_percent = need_number(params[i], pw, "span_percent");
        r.step_percent = need_number(params[i], pw, "step_percent");
        if (params[i].contains("nominal")) r.nominal = need_number(params[i], pw, "nominal");
        ranges.push_back(std::move(r));
    }
    return ranges;
}

AuditConfig parse_audit(const json& j) {
    const std::string where = "audit";
    reject_unknown(j, where, {"csv", "first_row_only", "sym_tol"});
    AuditConfig a;
    a.csv = need(j, where, "csv").get<std::string>();
    a.first_row_only = j.value("first_row_only", false);
    a.sym_tol = opt_number(j, "sym_tol", 1e-3);
    return a;
}

}  // namespace

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }

    reject_unknown(j, "", {"mode", "structure", "segmentation", "refinement", "sweep", "audit",
                           "output"});
    RunConfig config;
    std::string mode = need(j, "", "mode").get<std::string>();
    if (mode == "solve")
        config.mode = Mode::Solve;
    else if (mode == "converge")
        config.mode = Mode::Converge;
    else if (mode == "sweep")
        config.mode = Mode::Sweep;
    else if (mode == "audit")
        config.mode = Mode::Audit;
    else if (mode == "diffmask")
        config.mode = Mode::DiffMask;
    else
        fail("mode", "expected solve, converge, sweep, audit or diffmask");

    if (config.mode == Mode::Audit) {
        config.audit = parse_audit(need(j, "", "audit"));
    } else {
        config.structure = parse_structure(need(j, "", "structure"));
    }
    if (j.contains("segmentation")) config.segmentation = parse_segmentation(j["segmentation"]);
    if (j.contains("refinement")) config.refinement = parse_refinement(j["refinement"]);
    if (config.mode == Mode::Sweep || config.mode == Mode::DiffMask)
        config.sweep_ranges = parse_sweep(need(j, "", "sweep"));
    if (j.contains("output")) {
        reject_unknown(j["output"], "output", {"directory"});
        config.output_dir = need(j["output"], "output", "directory").get<std::string>();
    }
    return config;
}

SweepPlan make_sweep_plan(const RunConfig& config) {
    SweepPlan plan;
    plan.base = config.structure;
    for (const auto& range : config.sweep_ranges) {
        double nominal;
        if (range.nominal) {
            nominal = *range.nominal * (range.name.rfind("eps_layer_", 0) == 0 ? 1.0 : kMm);
        } else if (range.name == "t") {
            nominal = config.structure.thickness;
        } else if (range.name == "w") {
            nominal = config.structure.widths.front();
        } else if (range.name == "s") {
            nominal = config.structure.gaps.front();
        } else if (range.name.rfind("eps_layer_", 0) == 0) {
            size_t k = std::stoul(range.name.substr(10));
            if (k < 1 || k > config.structure.layer_eps.size())
                throw ConfigError("sweep parameter " + range.name + ": no such layer");
            nominal = config.structure.layer_eps[k - 1];
        } else {
            throw ConfigError("unknown sweep parameter " + range.name);
        }
        plan.parameters.push_back(
            {range.name, plan_from_range(nominal, range.span_percent, range.step_percent)});
    }
    return plan;
}

}  // namespace stripcap
