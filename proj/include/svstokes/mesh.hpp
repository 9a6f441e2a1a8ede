#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svstokes/geometry.hpp"

namespace svstokes {

using Tri = std::array<int, 3>;

/// Vertices plus counter-clockwise triangles. Constructed through
/// `make_triangulation` / `load_mesh`, which validate and orient.
struct Triangulation {
    std::vector<Vec2> vertices;
    std::vector<Tri> triangles;
};

/// Validates a raw triangle soup: index range, distinct corners,
/// non-degenerate area, no duplicate triangles, conforming edges.
/// Clockwise triangles are reordered counter-clockwise.
Triangulation make_triangulation(std::vector<Vec2> vertices, std::vector<Tri> triangles);

/// Parses the plain-text mesh format (`vertices N` / `triangles M` blocks).
Triangulation load_mesh(std::string_view text);
Triangulation load_mesh_file(const std::string& path);
std::string format_mesh(const Triangulation& mesh);

struct Edge {
    std::array<int, 2> v;     // sorted vertex pair
    std::vector<int> tris;    // one (boundary) or two (interior) triangles
    bool boundary() const { return tris.size() == 1; }
    int other(int z) const { return v[0] == z ? v[1] : v[0]; }
};

struct MeshCounts {
    int T = 0, E = 0, E0 = 0, V = 0, V0 = 0;
    int components = 0;
    int boundary_loops = 0;
    bool euler_ok = false;  // T - E + V == 1
    bool simply_connected() const { return euler_ok && components == 1 && boundary_loops == 1; }
};

/// Connectivity and cached triangle geometry. Immutable after construction.
class MeshTopology {
public:
    explicit MeshTopology(Triangulation mesh);

    const Triangulation& mesh() const { return mesh_; }
    const Vec2& point(int v) const { return mesh_.vertices[v]; }
    const Tri& triangle(int t) const { return mesh_.triangles[t]; }
    const TriangleGeom& geom(int t) const { return geom_[t]; }
    int num_vertices() const { return static_cast<int>(mesh_.vertices.size()); }
    int num_triangles() const { return static_cast<int>(mesh_.triangles.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[e]; }
    /// Index of the edge {a, b}, or -1.
    int find_edge(int a, int b) const;
    /// Edge indices of triangle t; entry k is opposite local slot k.
    const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }
    /// Local slot (0..2) of vertex v in triangle t, or -1.
    int slot(int t, int v) const;

    bool on_boundary(int v) const { return vertex_boundary_[v]; }
    const std::vector<int>& vertex_triangles(int v) const { return vertex_tris_[v]; }
    const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }
    /// Mesh neighbours of v, ascending.
    std::vector<int> neighbours(int v) const;

    const MeshCounts& counts() const { return counts_; }

private:
    Triangulation mesh_;
    std::vector<TriangleGeom> geom_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> tri_edges_;
    std::vector<std::vector<int>> vertex_tris_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<bool> vertex_boundary_;
    std::vector<std::vector<std::pair<int, int>>> adjacency_;  // (neighbour, edge)
    MeshCounts counts_;
};

/// Ordered star of a vertex: triangles T_1..T_N counter-clockwise with
/// T_j = (z, y_{j-1}, y_j). Rim vertices y_0..y_N; for an interior vertex
/// y_0 == y_N. Accessors take the 1-based indices used in the analysis and
/// wrap modulo N for interior vertices.
struct VertexPatch {
    int center = -1;
    bool interior = false;
    std::vector<int> tris;   // size N
    std::vector<int> rim;    // size N + 1

    // Per-triangle data, 0-based storage (index j-1 for T_j).
    std::vector<double> theta_;   // angle at z
    std::vector<double> area_;
    std::vector<Vec2> m_;         // outward unit normal of the edge opposite z
    std::vector<double> h_;       // distance from z to that edge
    // Per-spoke data for e_j = {z, y_j}, storage index j (0..N).
    std::vector<double> len_;
    std::vector<Vec2> t_;         // unit tangent z -> y_j
    std::vector<Vec2> n_;         // unit normal of e_j pointing out of T_j
    double diameter = 0.0;        // h_z

    int N() const { return static_cast<int>(tris.size()); }
    int wrap_tri(int j) const;    // 1-based triangle index -> storage
    int wrap_spoke(int j) const;  // 1-based spoke index -> storage

    int tri(int j) const { return tris[wrap_tri(j)]; }
    double theta(int j) const { return theta_[wrap_tri(j)]; }
    double area(int j) const { return area_[wrap_tri(j)]; }
    const Vec2& m(int j) const { return m_[wrap_tri(j)]; }
    double h(int j) const { return h_[wrap_tri(j)]; }
    int y(int j) const { return rim[wrap_spoke(j)]; }
    double len(int j) const { return len_[wrap_spoke(j)]; }
    const Vec2& t(int j) const { return t_[wrap_spoke(j)]; }
    const Vec2& n(int j) const { return n_[wrap_spoke(j)]; }

    /// 1-based position of global triangle id in the patch, or 0.
    int position(int triangle) const;
    /// Number of spokes that are interior edges (N for interior, N-1 otherwise).
    int interior_spokes() const { return interior ? N() : N() - 1; }
};

/// Orders the star of z. Throws MeshError for pinched (non-manifold) vertices.
VertexPatch enumerate_patch(const MeshTopology& topo, int z);

/// Mesh families used throughout the analysis.
namespace generators {

struct NgonOptions {
    int N = 6;
    double radius = 1.0;
    std::vector<double> length_factor;  // per spoke, optional
    std::vector<double> angle_offset;   // per spoke (radians), optional
};

Triangulation ngon_patch(const NgonOptions& opt);
/// Hexagonal region of the equilateral lattice with `n` rings.
Triangulation three_lines(int n, double L = 1.0);
/// n x n squares of side L, each split by both diagonals.
Triangulation crossed(int n, double L = 1.0);
/// n x n squares of side L, each split by the diagonal (x,y)-(x+L,y+L).
Triangulation type1_diagonal(int n, double L = 1.0);
/// Unit-spacing n x n grid with a random diagonal per cell and interior
/// vertices displaced by up to `amplitude` (fraction of the spacing).
Triangulation perturbed_grid(int n, std::uint64_t seed, double amplitude);

/// Dispatch by preset name; parameters not relevant to the preset are ignored.
struct Params {
    int n = 2;
    int N = 6;
    double L = 1.0;
    double radius = 1.0;
    std::uint64_t seed = 1;
    double amplitude = 0.15;
};
Triangulation generate(std::string_view preset, const Params& params);

}  // namespace generators

/// Rigid motion / scaling applied to all vertices.
Triangulation transformed(const Triangulation& mesh, double scale, double rotation, const Vec2& shift);

}  // namespace svstokes
