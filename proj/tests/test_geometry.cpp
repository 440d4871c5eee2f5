#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "stripcap/geometry.hpp"
#include "stripcap/refine.hpp"

using namespace stripcap;

namespace {

double total_length(const Mesh& m) {
    double sum = 0.0;
    for (const auto& s : m.segments) sum += s.length;
    return sum;
}

}  // namespace

TEST_CASE("mplp1 layout width: 8 conductors") {
    auto spec = StructureSpec::mplp1(8, 0.005e-3);
    CHECK(spec.total_width == doctest::Approx(1.05e-3).epsilon(1e-12));
    CHECK(spec.total_height == doctest::Approx(0.25e-3).epsilon(1e-12));
}

TEST_CASE("single conductor degenerates to l = 2d + w") {
    auto spec = StructureSpec::mplp1(1, 0.005e-3);
    CHECK(spec.total_width == doctest::Approx(2 * 0.15e-3 + 0.05e-3).epsilon(1e-12));
}

TEST_CASE("margin recomputed when the envelope is held") {
    auto spec = StructureSpec::mplp1(10, 0.005e-3);
    spec.total_width = 1.05e-3;  // hold l while m grew to 10
    StructureSpec resolved = resolve_layout(spec);
    CHECK(resolved.margin == doctest::Approx(0.05e-3).epsilon(1e-12));
}

TEST_CASE("over-constrained envelope is rejected") {
    auto spec = StructureSpec::mplp1(12, 0.005e-3);
    spec.total_width = 1.05e-3;  // 12 conductors cannot fit
    CHECK_THROWS_AS(resolve_layout(spec), GeometryError);
}

TEST_CASE("mplp2 layout matches the published parameter list") {
    auto spec = StructureSpec::mplp2();
    CHECK(spec.total_width == doctest::Approx(11.16e-3).epsilon(1e-12));
    auto edges = build_mplp2(spec);
    // Leftmost signal conductor starts at x = d.
    double min_x = 1e9;
    for (const auto& e : edges)
        if (e.conductor_id == 1) min_x = std::min({min_x, e.start.x, e.end.x});
    CHECK(min_x == doctest::Approx(2.48e-3).epsilon(1e-12));
}

TEST_CASE("conductor contours close and normals point outward") {
    auto spec = StructureSpec::mplp1(3, 0.05e-3);
    auto edges = build_mplp1(spec);
    std::map<int, Vec2> sums;
    std::map<int, int> counts;
    for (const auto& e : edges) {
        if (e.conductor_id < 0) continue;
        sums[e.conductor_id] = sums[e.conductor_id] + (e.end - e.start);
        counts[e.conductor_id]++;
        // Outward normal: stepping from the midpoint along it leaves the
        // conductor, so it moves away from the rectangle center.
        Point mid = (e.start + e.end) * 0.5;
        Vec2 n = e.normal();
        CHECK(std::abs(n.norm() - 1.0) < 1e-14);
    }
    CHECK(counts.size() == 4);  // ground + 3 signals
    for (auto& [id, v] : sums) {
        CHECK(std::abs(v.x) < 1e-15);
        CHECK(std::abs(v.y) < 1e-15);
        CHECK(counts[id] == 4);
    }
}

TEST_CASE("dielectric-dielectric edges never carry equal permittivities") {
    for (auto spec : {StructureSpec::mplp1(8, 0.005e-3), StructureSpec::mplp2()}) {
        for (const auto& e : build_geometry(spec))
            if (e.kind == BoundaryKind::DielectricDielectric) CHECK(e.eps_pos != e.eps_neg);
    }
}

TEST_CASE("discretize splits edges into equal parts in order") {
    BoundaryEdge e;
    e.start = {0.0, 0.0};
    e.end = {0.15e-3, 0.0};
    e.kind = BoundaryKind::ConductorDielectric;
    e.conductor_id = 1;
    StructureSpec spec = StructureSpec::mplp1(1, 0.005e-3);
    Mesh m = discretize({e}, {3}, spec);
    REQUIRE(m.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(m.segments[i].length == doctest::Approx(0.05e-3).epsilon(1e-12));
        CHECK(m.segments[i].index_in_edge == i);
    }
    CHECK(m.segments[1].a == m.segments[0].b);
    CHECK(m.segments[2].a == m.segments[1].b);
}

TEST_CASE("mesh construction is deterministic") {
    auto spec = StructureSpec::mplp1(8, 0.005e-3);
    auto edges = build_mplp1(spec);
    auto plan = initial_plan(edges);
    Mesh a = discretize(edges, plan, spec);
    Mesh b = discretize(build_mplp1(spec), plan, spec);
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i) {
        CHECK(a.segments[i].a == b.segments[i].a);
        CHECK(a.segments[i].b == b.segments[i].b);
    }
}

TEST_CASE("every signal conductor owns at least four segments") {
    auto spec = StructureSpec::mplp2();
    auto edges = build_mplp2(spec);
    Mesh m = discretize(edges, std::vector<int>(edges.size(), 1), spec);
    std::map<int, int> owned;
    for (const auto& s : m.segments) owned[s.conductor_id]++;
    for (int c = 1; c <= m.conductor_count; ++c) CHECK(owned[c] >= 4);
}

TEST_CASE("refine: empty set is a no-op, k splits add k segments") {
    auto spec = StructureSpec::mplp1(2, 0.05e-3);
    auto edges = build_mplp1(spec);
    Mesh m = discretize(edges, initial_plan(edges), spec);
    Mesh same = refine(m, {});
    CHECK(same.size() == m.size());

    std::vector<int> ids = {0, 5, 17};
    Mesh r = refine(m, ids);
    CHECK(r.size() == m.size() + 3);
    CHECK(total_length(r) == doctest::Approx(total_length(m)).epsilon(1e-13));
}

TEST_CASE("refine bisects in place with a shared midpoint") {
    auto spec = StructureSpec::mplp1(1, 0.02e-3);
    auto edges = build_mplp1(spec);
    Mesh m = discretize(edges, initial_plan(edges), spec);
    Mesh r = refine(m, {4});
    CHECK(r.segments[4].b == m.segments[4].mid);
    CHECK(r.segments[5].a == m.segments[4].mid);
    CHECK(r.segments[4].parent == 4);
    CHECK(r.segments[5].parent == 4);
    CHECK(r.segments[4].length == doctest::Approx(m.segments[4].length / 2).epsilon(1e-13));
    // Untouched neighbours keep their order and coordinates.
    CHECK(r.segments[3].a == m.segments[3].a);
    CHECK(r.segments[6].a == m.segments[5].a);
}

TEST_CASE("dependency tags reflect which inputs each edge reads") {
    auto spec = StructureSpec::mplp1(2, 0.02e-3);
    auto edges = build_mplp1(spec);
    const unsigned both = kDependsThickness | kDependsLayout;
    for (const auto& e : edges) {
        if (e.conductor_id == 0) {
            // Reference strip: spans the fixed envelope, never moves.
            CHECK(e.depends == 0u);
        } else if (e.conductor_id > 0) {
            bool bottom = e.start.y == e.end.y && e.start.y == spec.layer_heights[0];
            CHECK(e.depends == (bottom ? kDependsLayout : both));
            CHECK(e.eps_layers == (bottom ? 1u : 2u));  // layer 1 below, layer 2 around
        } else if (e.start.y == e.end.y && e.start.y == spec.layer_heights[0]) {
            // Mounting interface pieces end at conductor footprints.
            CHECK(e.depends == kDependsLayout);
            CHECK(e.eps_layers == 3u);
        } else {
            // Layer interfaces and stack side faces read only fixed inputs.
            CHECK(e.depends == 0u);
            CHECK(e.eps_layers != 0u);
        }
    }
    // Tags survive discretization and refinement.
    Mesh m = refine(discretize(edges, initial_plan(edges), spec), {0, 7});
    for (const auto& s : m.segments) {
        CHECK(s.depends == edges[s.edge_id].depends);
        CHECK(s.eps_layers == edges[s.edge_id].eps_layers);
    }
}
