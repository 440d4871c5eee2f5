#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace stripcap {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    /// 90-degree counter-clockwise rotation.
    Vec2 perp() const { return {-y, x}; }
};

using Point = Vec2;

enum class BoundaryKind { ConductorDielectric, DielectricDielectric };

/// Bits marking which sweepable inputs an edge's coordinates are computed
/// from. Sampled comparisons cannot decide this: a coordinate that is
/// algebraically independent of a parameter (e.g. d + w with d compensating
/// w under a fixed envelope) still wiggles by an ulp as the parameter moves,
/// so exact partial sweep updates need the dependency tracked at build time.
inline constexpr unsigned kDependsThickness = 1u;  // conductor thickness t
inline constexpr unsigned kDependsLayout = 2u;     // widths, gaps, margin

/// One straight piece of the cross-section boundary. The unit normal is the
/// 90-degree CCW rotation of the direction start->end; conductor contours are
/// emitted clockwise so normals point out of the conductor material.
struct BoundaryEdge {
    Point start;
    Point end;
    BoundaryKind kind = BoundaryKind::ConductorDielectric;
    int conductor_id = -1;  // >= 0 for conductor edges, 0 = reference/ground
    double eps_pos = 1.0;   // relative permittivity on the side the normal points toward
    double eps_neg = 1.0;   // relative permittivity on the opposite side
    int seg_count = 1;
    unsigned depends = 0;    // kDepends* bits for the edge coordinates
    unsigned eps_layers = 0; // bit k-1 set if eps_pos/eps_neg read layer k

    Vec2 direction() const {
        Vec2 d = end - start;
        double len = d.norm();
        return {d.x / len, d.y / len};
    }
    Vec2 normal() const { return direction().perp(); }
    double length() const { return (end - start).norm(); }
    bool vertical() const { return std::abs(end.x - start.x) < std::abs(end.y - start.y); }
};

enum class Family { Mplp1, Mplp2, Generic };

/// Parametric cross-section description. All lengths in meters.
struct StructureSpec {
    Family family = Family::Mplp1;
    int conductor_count = 1;           // signal conductors, excluding reference
    double thickness = 0.0;            // conductor thickness t
    std::vector<double> widths;        // one per signal conductor
    std::vector<double> gaps;          // conductor_count - 1 entries
    double margin = 0.0;               // edge margin d
    std::vector<double> layer_heights; // dielectric layers, bottom up
    std::vector<double> layer_eps;
    double total_width = 0.0;          // fixed envelope l (0 = derive from layout)
    double total_height = 0.0;         // fixed envelope H (0 = derive from layers)
    double ground_thickness = 0.01e-3; // reference strip below the stack

    /// Coupled-line fixture: m conductors of width 0.05 mm, gaps 0.05 mm,
    /// margin 0.15 mm on a 0.05/0.15/0.05 mm stack with eps 3.8/2/3.8.
    static StructureSpec mplp1(int m, double t);
    /// Ten-conductor line on a 1 mm eps_r = 4 substrate, unequal widths/gaps.
    static StructureSpec mplp2();

    double layout_width() const;  // 2d + sum(w) + sum(s)
    double stack_height() const;  // sum(h)
};

/// Oriented straight panel carrying piecewise-constant charge density.
struct Segment {
    Point a;
    Point b;
    Point mid;
    double length = 0.0;
    Vec2 normal;
    BoundaryKind kind = BoundaryKind::ConductorDielectric;
    int conductor_id = -1;
    double eps_pos = 1.0;
    double eps_neg = 1.0;
    int edge_id = -1;
    int index_in_edge = 0;  // position within the parent edge, pre-refinement
    int parent = -1;        // index in the pre-refinement mesh, if split
    unsigned depends = 0;    // inherited from the parent edge
    unsigned eps_layers = 0; // inherited from the parent edge
};

struct Mesh {
    std::vector<Segment> segments;
    int conductor_count = 0;  // N_C, signal conductors
    StructureSpec spec;
    std::vector<int> per_edge_counts;

    int size() const { return static_cast<int>(segments.size()); }
};

class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Validates the spec and fills derived fields (margin from a fixed envelope,
/// envelope from the layout). Throws GeometryError on over-constrained input.
StructureSpec resolve_layout(const StructureSpec& spec);

std::vector<BoundaryEdge> build_mplp1(const StructureSpec& spec);
std::vector<BoundaryEdge> build_mplp2(const StructureSpec& spec);
std::vector<BoundaryEdge> build_geometry(const StructureSpec& spec);

/// Splits every edge into plan[edge] equal segments, in construction order.
Mesh discretize(const std::vector<BoundaryEdge>& edges, const std::vector<int>& plan,
                const StructureSpec& spec);

/// Replaces each listed segment by its two halves, in place; all other
/// segments keep their relative order.
Mesh refine(const Mesh& mesh, const std::vector<int>& ids);

}  // namespace stripcap
