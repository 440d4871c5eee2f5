#include "stripcap/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace stripcap {

namespace {

constexpr double kMm = 1e-3;

void require(bool cond, const std::string& msg) {
    if (!cond) throw GeometryError(msg);
}

struct FaceTag {
    double eps = 1.0;
    unsigned eps_layers = 0;
};

/// Emits the four edges of a conductor rectangle clockwise (top, right,
/// bottom, left) so that CCW-rotated edge normals point outward. dep_horiz
/// tags what the x coordinates depend on, dep_top what the top y depends on.
void add_conductor_rect(std::vector<BoundaryEdge>& out, double x0, double x1, double y0,
                        double y1, int id, FaceTag top, FaceTag side, FaceTag bottom,
                        unsigned dep_horiz, unsigned dep_top) {
    auto edge = [&](Point a, Point b, FaceTag f, unsigned depends) {
        BoundaryEdge e;
        e.start = a;
        e.end = b;
        e.kind = BoundaryKind::ConductorDielectric;
        e.conductor_id = id;
        e.eps_pos = f.eps;
        e.eps_neg = f.eps;
        e.depends = depends;
        e.eps_layers = f.eps_layers;
        out.push_back(e);
    };
    edge({x0, y1}, {x1, y1}, top, dep_horiz | dep_top);
    edge({x1, y1}, {x1, y0}, side, dep_horiz | dep_top);
    edge({x1, y0}, {x0, y0}, bottom, dep_horiz);
    edge({x0, y0}, {x0, y1}, side, dep_horiz | dep_top);
}

void add_dielectric_edge(std::vector<BoundaryEdge>& out, Point a, Point b, FaceTag pos,
                         FaceTag neg, unsigned depends) {
    BoundaryEdge e;
    e.start = a;
    e.end = b;
    e.kind = BoundaryKind::DielectricDielectric;
    e.eps_pos = pos.eps;
    e.eps_neg = neg.eps;
    e.depends = depends;
    e.eps_layers = pos.eps_layers | neg.eps_layers;
    out.push_back(e);
}

/// Shared builder: conductors rest on top of layer 1 and protrude into layer 2
/// (or into air when there is a single layer). The reference conductor is a
/// strip spanning the full width below the stack; the stack is laterally
/// finite with dielectric-air outer faces.
std::vector<BoundaryEdge> build_layered(const StructureSpec& raw) {
    StructureSpec spec = resolve_layout(raw);
    const int m = spec.conductor_count;
    const double l = spec.total_width;
    const double t = spec.thickness;
    const double h1 = spec.layer_heights.front();
    const int layers = static_cast<int>(spec.layer_heights.size());
    const double eps1 = spec.layer_eps.front();
    const double eps_above = layers >= 2 ? spec.layer_eps[1] : 1.0;

    if (layers >= 2) {
        require(t < spec.layer_heights[1],
                "conductor thickness exceeds the layer above the mounting interface");
    }

    std::vector<BoundaryEdge> out;

    const FaceTag air{1.0, 0u};
    const FaceTag tag1{eps1, 1u << 0};
    const FaceTag tag_above = layers >= 2 ? FaceTag{eps_above, 1u << 1} : air;

    // Reference conductor, id 0, below the dielectric stack. Its span and
    // depth come from l and the ground thickness only.
    add_conductor_rect(out, 0.0, l, -spec.ground_thickness, 0.0, 0, tag1, air, air, 0u, 0u);

    // Signal conductors, left to right. The x coordinates read the layout
    // (widths, gaps, margin), the top face additionally reads t.
    std::vector<double> x_left(m);
    double x = spec.margin;
    for (int i = 0; i < m; ++i) {
        x_left[i] = x;
        add_conductor_rect(out, x, x + spec.widths[i], h1, h1 + t, i + 1, tag_above, tag_above,
                           tag1, kDependsLayout, kDependsThickness);
        x += spec.widths[i];
        if (i + 1 < m) x += spec.gaps[i];
    }

    // Mounting interface (top of layer 1), conductor footprints excluded.
    if (eps_above != eps1) {
        double prev = 0.0;
        for (int i = 0; i <= m; ++i) {
            double next = i < m ? x_left[i] : l;
            if (next > prev)
                add_dielectric_edge(out, {prev, h1}, {next, h1}, tag_above, tag1,
                                    kDependsLayout);
            if (i < m) prev = x_left[i] + spec.widths[i];
        }
    }

    // Interfaces between the remaining layers, then the top face against air.
    double y = h1;
    for (int k = 1; k < layers; ++k) {
        FaceTag below{spec.layer_eps[k], 1u << k};
        FaceTag up = k + 1 < layers ? FaceTag{spec.layer_eps[k + 1], 1u << (k + 1)} : air;
        y += spec.layer_heights[k];
        if (up.eps != below.eps)
            add_dielectric_edge(out, {0.0, y}, {l, y}, up, below, 0u);
    }

    // Side faces against air, one edge per layer, bottom up.
    double y0 = 0.0;
    for (int k = 0; k < layers; ++k) {
        double y1 = y0 + spec.layer_heights[k];
        if (spec.layer_eps[k] != 1.0) {
            FaceTag inner{spec.layer_eps[k], 1u << k};
            add_dielectric_edge(out, {0.0, y0}, {0.0, y1}, air, inner, 0u);
            add_dielectric_edge(out, {l, y1}, {l, y0}, air, inner, 0u);
        }
        y0 = y1;
    }

    return out;
}

}  // namespace

StructureSpec StructureSpec::mplp1(int m, double t) {
    StructureSpec s;
    s.family = Family::Mplp1;
    s.conductor_count = m;
    s.thickness = t;
    s.widths.assign(m, 0.05 * kMm);
    s.gaps.assign(std::max(m - 1, 0), 0.05 * kMm);
    s.margin = 0.15 * kMm;
    s.layer_heights = {0.05 * kMm, 0.15 * kMm, 0.05 * kMm};
    s.layer_eps = {3.8, 2.0, 3.8};
    return resolve_layout(s);
}

StructureSpec StructureSpec::mplp2() {
    StructureSpec s;
    s.family = Family::Mplp2;
    s.conductor_count = 10;
    s.thickness = 0.02 * kMm;
    s.widths = {0.2, 0.3, 0.4, 0.5, 0.6, 0.5, 0.4, 0.3, 0.2, 0.3};
    s.gaps = {0.25, 0.3, 0.35, 0.25, 0.2, 0.25, 0.3, 0.35, 0.25};
    for (auto& w : s.widths) w *= kMm;
    for (auto& g : s.gaps) g *= kMm;
    s.margin = 2.48 * kMm;
    s.layer_heights = {1.0 * kMm};
    s.layer_eps = {4.0};
    return resolve_layout(s);
}

double StructureSpec::layout_width() const {
    double sum = 2.0 * margin;
    sum = std::accumulate(widths.begin(), widths.end(), sum);
    return std::accumulate(gaps.begin(), gaps.end(), sum);
}

double StructureSpec::stack_height() const {
    return std::accumulate(layer_heights.begin(), layer_heights.end(), 0.0);
}

StructureSpec resolve_layout(const StructureSpec& raw) {
    StructureSpec spec = raw;
    const int m = spec.conductor_count;
    require(m >= 1, "conductor count must be >= 1");
    require(static_cast<int>(spec.widths.size()) == m, "expected one width per conductor");
    require(static_cast<int>(spec.gaps.size()) == m - 1, "expected m-1 gaps");
    require(!spec.layer_heights.empty(), "at least one dielectric layer is required");
    require(spec.layer_heights.size() == spec.layer_eps.size(),
            "layer heights and permittivities must pair up");
    for (double w : spec.widths) require(w > 0.0, "conductor width must be positive");
    for (double h : spec.layer_heights) require(h > 0.0, "layer height must be positive");
    for (double e : spec.layer_eps) require(e >= 1.0, "relative permittivity must be >= 1");
    require(spec.thickness > 0.0, "conductor thickness must be positive");
    require(spec.ground_thickness > 0.0, "ground thickness must be positive");

    if (spec.total_width > 0.0) {
        double occupied = std::accumulate(spec.widths.begin(), spec.widths.end(), 0.0);
        occupied = std::accumulate(spec.gaps.begin(), spec.gaps.end(), occupied);
        spec.margin = 0.5 * (spec.total_width - occupied);
        require(spec.margin > 0.0, "geometry over-constrained: computed edge margin <= 0");
    } else {
        spec.total_width = spec.layout_width();
    }
    for (double g : spec.gaps) require(g > 0.0, "conductors overlap: gap <= 0");

    if (spec.total_height > 0.0) {
        require(std::abs(spec.total_height - spec.stack_height()) <=
                    1e-12 * spec.stack_height(),
                "total height does not match the layer stack");
    } else {
        spec.total_height = spec.stack_height();
    }
    return spec;
}

std::vector<BoundaryEdge> build_mplp1(const StructureSpec& spec) {
    require(spec.family == Family::Mplp1, "spec family is not MPLP1");
    return build_layered(spec);
}

std::vector<BoundaryEdge> build_mplp2(const StructureSpec& spec) {
    require(spec.family == Family::Mplp2, "spec family is not MPLP2");
    require(spec.conductor_count == 10, "MPLP2 is a ten-conductor fixture");
    return build_layered(spec);
}

std::vector<BoundaryEdge> build_geometry(const StructureSpec& spec) {
    switch (spec.family) {
        case Family::Mplp1: return build_mplp1(spec);
        case Family::Mplp2: return build_mplp2(spec);
        case Family::Generic: return build_layered(spec);
    }
    throw GeometryError("unknown structure family");
}

Mesh discretize(const std::vector<BoundaryEdge>& edges, const std::vector<int>& plan,
                const StructureSpec& spec) {
    require(plan.size() == edges.size(), "segmentation plan does not match edge count");
    Mesh mesh;
    mesh.spec = resolve_layout(spec);
    mesh.conductor_count = mesh.spec.conductor_count;
    mesh.per_edge_counts = plan;
    for (size_t e = 0; e < edges.size(); ++e) {
        const BoundaryEdge& edge = edges[e];
        int n = plan[e];
        require(n >= 1, "segment count must be >= 1");
        Vec2 d = edge.end - edge.start;
        for (int i = 0; i < n; ++i) {
            Segment s;
            s.a = edge.start + d * (static_cast<double>(i) / n);
            s.b = edge.start + d * (static_cast<double>(i + 1) / n);
            s.mid = (s.a + s.b) * 0.5;
            s.length = (s.b - s.a).norm();
            s.normal = edge.normal();
            s.kind = edge.kind;
            s.conductor_id = edge.conductor_id;
            s.eps_pos = edge.eps_pos;
            s.eps_neg = edge.eps_neg;
            s.edge_id = static_cast<int>(e);
            s.index_in_edge = i;
            s.depends = edge.depends;
            s.eps_layers = edge.eps_layers;
            mesh.segments.push_back(s);
        }
    }
    return mesh;
}

Mesh refine(const Mesh& mesh, const std::vector<int>& ids) {
    std::set<int> split(ids.begin(), ids.end());
    if (!split.empty()) {
        require(*split.begin() >= 0 && *split.rbegin() < mesh.size(),
                "refinement id out of range");
    }
    Mesh out;
    out.conductor_count = mesh.conductor_count;
    out.spec = mesh.spec;
    out.per_edge_counts = mesh.per_edge_counts;
    out.segments.reserve(mesh.segments.size() + split.size());
    for (int i = 0; i < mesh.size(); ++i) {
        const Segment& s = mesh.segments[i];
        if (!split.count(i)) {
            out.segments.push_back(s);
            continue;
        }
        Segment lo = s, hi = s;
        lo.b = s.mid;
        lo.mid = (lo.a + lo.b) * 0.5;
        lo.length = (lo.b - lo.a).norm();
        lo.parent = i;
        hi.a = s.mid;
        hi.mid = (hi.a + hi.b) * 0.5;
        hi.length = (hi.b - hi.a).norm();
        hi.parent = i;
        out.segments.push_back(lo);
        out.segments.push_back(hi);
    }
    return out;
}

}  // namespace stripcap
