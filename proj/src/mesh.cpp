#include "svstokes/mesh.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "svstokes/errors.hpp"

namespace svstokes {

namespace {

std::array<int, 2> sorted_pair(int a, int b) { return a < b ? std::array{a, b} : std::array{b, a}; }

// Union-find for component counting.
struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Triangulation make_triangulation(std::vector<Vec2> vertices, std::vector<Tri> triangles) {
    const int nv = static_cast<int>(vertices.size());
    if (triangles.empty()) throw MeshError("mesh has no triangles");
    std::set<std::array<int, 3>> seen;
    std::map<std::array<int, 2>, int> edge_count;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        Tri& tri = triangles[t];
        for (int v : tri) {
            if (v < 0 || v >= nv) {
                throw MeshError("triangle " + std::to_string(t) + " references vertex " + std::to_string(v) +
                                " out of range");
            }
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
            throw MeshError("triangle " + std::to_string(t) + " has repeated vertices");
        }
        const Vec2& a = vertices[tri[0]];
        const Vec2& b = vertices[tri[1]];
        const Vec2& c = vertices[tri[2]];
        const double diam = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
        const double signed_area = 0.5 * cross2(b - a, c - a);
        if (std::abs(signed_area) <= kDegenerateAreaRatio * diam * diam) {
            throw MeshError("triangle " + std::to_string(t) + " is degenerate");
        }
        if (signed_area < 0) std::swap(tri[1], tri[2]);
        std::array<int, 3> key = tri;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) throw MeshError("duplicate triangle " + std::to_string(t));
        for (int k = 0; k < 3; ++k) ++edge_count[sorted_pair(tri[(k + 1) % 3], tri[(k + 2) % 3])];
    }
    for (const auto& [e, count] : edge_count) {
        if (count > 2) {
            throw MeshError("edge " + std::to_string(e[0]) + "-" + std::to_string(e[1]) + " shared by " +
                            std::to_string(count) + " triangles");
        }
    }
    // Hanging vertices: a vertex lying in the interior of some edge.
    for (const auto& [e, count] : edge_count) {
        const Vec2& a = vertices[e[0]];
        const Vec2& b = vertices[e[1]];
        const double len = (b - a).norm();
        for (int v = 0; v < nv; ++v) {
            if (v == e[0] || v == e[1]) continue;
            const Vec2& p = vertices[v];
            const double s = (p - a).dot(b - a) / (len * len);
            if (s <= 1e-12 || s >= 1 - 1e-12) continue;
            if (std::abs(cross2(b - a, p - a)) / len < 1e-12 * len) {
                throw MeshError("non-conforming mesh: vertex " + std::to_string(v) + " lies on edge " +
                                std::to_string(e[0]) + "-" + std::to_string(e[1]));
            }
        }
    }
    return Triangulation{std::move(vertices), std::move(triangles)};
}

Triangulation load_mesh(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    auto next_line = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };
    auto header = [&](const char* keyword) -> long {
        std::string s;
        if (!next_line(s)) throw ParseError(line_no, std::string("expected '") + keyword + " <count>'");
        std::istringstream ls(s);
        std::string word;
        long count = -1;
        std::string extra;
        if (!(ls >> word >> count) || word != keyword || count < 0 || (ls >> extra)) {
            throw ParseError(line_no, std::string("expected '") + keyword + " <count>'");
        }
        return count;
    };

    const long nv = header("vertices");
    std::vector<Vec2> vertices;
    vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        std::string s;
        if (!next_line(s)) throw ParseError(line_no, "unexpected end of file in vertex block");
        std::istringstream ls(s);
        double x, y;
        std::string extra;
        if (!(ls >> x >> y) || (ls >> extra) || !std::isfinite(x) || !std::isfinite(y)) {
            throw ParseError(line_no, "expected 'x y'");
        }
        vertices.emplace_back(x, y);
    }
    const long nt = header("triangles");
    std::vector<Tri> triangles;
    triangles.reserve(nt);
    for (long i = 0; i < nt; ++i) {
        std::string s;
        if (!next_line(s)) throw ParseError(line_no, "unexpected end of file in triangle block");
        std::istringstream ls(s);
        long a, b, c;
        std::string extra;
        if (!(ls >> a >> b >> c) || (ls >> extra)) throw ParseError(line_no, "expected 'i j k'");
        for (long v : {a, b, c}) {
            if (v < 0 || v >= nv) throw ParseError(line_no, "vertex index " + std::to_string(v) + " out of range");
        }
        triangles.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
    }
    std::string s;
    if (next_line(s)) throw ParseError(line_no, "trailing content after triangle block");
    return make_triangulation(std::move(vertices), std::move(triangles));
}

Triangulation load_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open mesh file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_mesh(buf.str());
}

std::string format_mesh(const Triangulation& mesh) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "vertices " << mesh.vertices.size() << '\n';
    for (const Vec2& p : mesh.vertices) out << p.x() << ' ' << p.y() << '\n';
    out << "triangles " << mesh.triangles.size() << '\n';
    for (const Tri& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    return out.str();
}

MeshTopology::MeshTopology(Triangulation mesh) : mesh_(std::move(mesh)) {
    const int nv = num_vertices();
    const int nt = num_triangles();
    geom_.reserve(nt);
    for (const Tri& t : mesh_.triangles) {
        geom_.push_back(triangle_geometry(mesh_.vertices[t[0]], mesh_.vertices[t[1]], mesh_.vertices[t[2]]));
    }

    std::map<std::array<int, 2>, int> index;
    tri_edges_.resize(nt);
    vertex_tris_.assign(nv, {});
    for (int t = 0; t < nt; ++t) {
        const Tri& tri = mesh_.triangles[t];
        for (int k = 0; k < 3; ++k) {
            vertex_tris_[tri[k]].push_back(t);
            const auto key = sorted_pair(tri[(k + 1) % 3], tri[(k + 2) % 3]);
            auto [it, inserted] = index.try_emplace(key, static_cast<int>(edges_.size()));
            if (inserted) edges_.push_back(Edge{key, {}});
            Edge& e = edges_[it->second];
            e.tris.push_back(t);
            if (e.tris.size() > 2) throw MeshError("edge shared by more than two triangles");
            tri_edges_[t][k] = it->second;
        }
    }
    vertex_edges_.assign(nv, {});
    adjacency_.assign(nv, {});
    vertex_boundary_.assign(nv, false);
    for (int e = 0; e < num_edges(); ++e) {
        const Edge& ed = edges_[e];
        for (int v : ed.v) vertex_edges_[v].push_back(e);
        adjacency_[ed.v[0]].emplace_back(ed.v[1], e);
        adjacency_[ed.v[1]].emplace_back(ed.v[0], e);
        if (ed.boundary()) vertex_boundary_[ed.v[0]] = vertex_boundary_[ed.v[1]] = true;
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

    MeshCounts& c = counts_;
    c.T = nt;
    c.E = num_edges();
    c.V = nv;
    for (const Edge& e : edges_) c.E0 += e.boundary() ? 0 : 1;
    for (int v = 0; v < nv; ++v) c.V0 += (vertex_boundary_[v] || vertex_tris_[v].empty()) ? 0 : 1;
    c.euler_ok = (c.T - c.E + c.V) == 1;

    Dsu tri_sets(nt);
    for (const Edge& e : edges_) {
        if (e.tris.size() == 2) tri_sets.unite(e.tris[0], e.tris[1]);
    }
    std::set<int> roots;
    for (int t = 0; t < nt; ++t) roots.insert(tri_sets.find(t));
    c.components = static_cast<int>(roots.size());

    Dsu loop_sets(nv);
    std::set<int> bverts;
    for (const Edge& e : edges_) {
        if (!e.boundary()) continue;
        loop_sets.unite(e.v[0], e.v[1]);
        bverts.insert(e.v[0]);
        bverts.insert(e.v[1]);
    }
    std::set<int> loops;
    for (int v : bverts) loops.insert(loop_sets.find(v));
    c.boundary_loops = static_cast<int>(loops.size());
}

int MeshTopology::find_edge(int a, int b) const {
    if (a < 0 || a >= num_vertices()) return -1;
    auto it = std::lower_bound(adjacency_[a].begin(), adjacency_[a].end(), std::pair{b, -1});
    if (it != adjacency_[a].end() && it->first == b) return it->second;
    return -1;
}

int MeshTopology::slot(int t, int v) const {
    const Tri& tri = mesh_.triangles[t];
    for (int k = 0; k < 3; ++k) {
        if (tri[k] == v) return k;
    }
    return -1;
}

std::vector<int> MeshTopology::neighbours(int v) const {
    std::vector<int> out;
    out.reserve(adjacency_[v].size());
    for (const auto& [w, e] : adjacency_[v]) out.push_back(w);
    return out;
}

int VertexPatch::wrap_tri(int j) const {
    const int n = N();
    if (interior) return ((j - 1) % n + n) % n;
    assert(j >= 1 && j <= n);
    return j - 1;
}

int VertexPatch::wrap_spoke(int j) const {
    const int n = N();
    if (interior) return (j % n + n) % n;
    assert(j >= 0 && j <= n);
    return j;
}

int VertexPatch::position(int triangle) const {
    for (int j = 0; j < N(); ++j) {
        if (tris[j] == triangle) return j + 1;
    }
    return 0;
}

VertexPatch enumerate_patch(const MeshTopology& topo, int z) {
    if (z < 0 || z >= topo.num_vertices()) throw MeshError("vertex " + std::to_string(z) + " out of range");
    const auto& star = topo.vertex_triangles(z);
    if (star.empty()) throw MeshError("vertex " + std::to_string(z) + " belongs to no triangle");

    // For triangle t with z at slot k, the counter-clockwise successors of z.
    auto first_rim = [&](int t) { return topo.triangle(t)[(topo.slot(t, z) + 1) % 3]; };
    auto second_rim = [&](int t) { return topo.triangle(t)[(topo.slot(t, z) + 2) % 3]; };

    VertexPatch p;
    p.center = z;
    p.interior = !topo.on_boundary(z);

    int start = -1;
    if (p.interior) {
        start = *std::min_element(star.begin(), star.end());
    } else {
        for (int t : star) {
            const int e = topo.find_edge(z, first_rim(t));
            if (topo.edge(e).boundary()) {
                if (start >= 0) throw MeshError("pinched boundary vertex " + std::to_string(z));
                start = t;
            }
        }
        if (start < 0) throw MeshError("boundary vertex " + std::to_string(z) + " without a leading boundary edge");
    }

    p.rim.push_back(first_rim(start));
    int current = start;
    std::set<int> visited;
    while (true) {
        if (!visited.insert(current).second) break;
        p.tris.push_back(current);
        const int b = second_rim(current);
        p.rim.push_back(b);
        const Edge& e = topo.edge(topo.find_edge(z, b));
        if (e.boundary()) break;
        const int next = e.tris[0] == current ? e.tris[1] : e.tris[0];
        if (next == start) break;
        current = next;
    }
    if (p.tris.size() != star.size()) throw MeshError("pinched (non-manifold) vertex " + std::to_string(z));
    if (p.interior && p.rim.front() != p.rim.back()) throw MeshError("open star at interior vertex " + std::to_string(z));

    const int n = p.N();
    const Vec2& zc = topo.point(z);
    p.len_.resize(n + 1);
    p.t_.resize(n + 1);
    p.n_.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        const Vec2 d = topo.point(p.rim[j]) - zc;
        p.len_[j] = d.norm();
        p.t_[j] = d / p.len_[j];
        p.n_[j] = perp(p.t_[j]);
    }
    p.theta_.resize(n);
    p.area_.resize(n);
    p.m_.resize(n);
    p.h_.resize(n);
    double diam = 0.0;
    for (int j = 0; j < n; ++j) {
        const int t = p.tris[j];
        const TriangleGeom& g = topo.geom(t);
        const int k = topo.slot(t, z);
        p.theta_[j] = g.angle[k];
        p.area_[j] = g.area;
        p.m_[j] = g.normal[k];
        p.h_[j] = g.height[k];
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) diam = std::max(diam, (g.point[a] - g.point[b]).norm());
        }
    }
    p.diameter = diam;
    return p;
}

namespace generators {

Triangulation ngon_patch(const NgonOptions& opt) {
    if (opt.N < 3) throw InputError("ngon_patch needs N >= 3");
    if (!(opt.radius > 0)) throw InputError("ngon_patch needs radius > 0");
    std::vector<Vec2> vertices{Vec2::Zero()};
    std::vector<Tri> triangles;
    for (int k = 0; k < opt.N; ++k) {
        const double f = k < static_cast<int>(opt.length_factor.size()) ? opt.length_factor[k] : 1.0;
        const double da = k < static_cast<int>(opt.angle_offset.size()) ? opt.angle_offset[k] : 0.0;
        const double a = 2.0 * std::numbers::pi * k / opt.N + da;
        vertices.emplace_back(opt.radius * f * std::cos(a), opt.radius * f * std::sin(a));
    }
    for (int k = 0; k < opt.N; ++k) {
        const int a = 1 + k;
        const int b = 1 + (k + 1) % opt.N;
        if (cross2(vertices[a], vertices[b]) <= 0) throw InputError("ngon_patch perturbation inverts a triangle");
        triangles.push_back({0, a, b});
    }
    return make_triangulation(std::move(vertices), std::move(triangles));
}

Triangulation three_lines(int n, double L) {
    if (n < 1) throw InputError("three_lines needs n >= 1");
    const Vec2 e1(L, 0.0);
    const Vec2 e2(0.5 * L, 0.5 * std::sqrt(3.0) * L);
    std::map<std::pair<int, int>, int> id;
    std::vector<Vec2> vertices;
    auto inside = [n](int a, int b) { return std::max({std::abs(a), std::abs(b), std::abs(a + b)}) <= n; };
    for (int b = -n; b <= n; ++b) {
        for (int a = -n; a <= n; ++a) {
            if (!inside(a, b)) continue;
            id[{a, b}] = static_cast<int>(vertices.size());
            vertices.push_back(a * e1 + b * e2);
        }
    }
    std::vector<Tri> triangles;
    for (int b = -n; b <= n; ++b) {
        for (int a = -n; a <= n; ++a) {
            if (inside(a, b) && inside(a + 1, b) && inside(a, b + 1)) {
                triangles.push_back({id[{a, b}], id[{a + 1, b}], id[{a, b + 1}]});
            }
            if (inside(a + 1, b) && inside(a + 1, b + 1) && inside(a, b + 1)) {
                triangles.push_back({id[{a + 1, b}], id[{a + 1, b + 1}], id[{a, b + 1}]});
            }
        }
    }
    return make_triangulation(std::move(vertices), std::move(triangles));
}

Triangulation crossed(int n, double L) {
    if (n < 1) throw InputError("crossed needs n >= 1");
    if (!(L > 0)) throw InputError("crossed needs L > 0");
    std::vector<Vec2> vertices;
    auto corner = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) vertices.emplace_back(i * L, j * L);
    }
    std::vector<Tri> triangles;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int c = static_cast<int>(vertices.size());
            vertices.emplace_back((i + 0.5) * L, (j + 0.5) * L);
            const int a = corner(i, j), b = corner(i + 1, j), d = corner(i + 1, j + 1), e = corner(i, j + 1);
            triangles.push_back({a, b, c});
            triangles.push_back({b, d, c});
            triangles.push_back({d, e, c});
            triangles.push_back({e, a, c});
        }
    }
    return make_triangulation(std::move(vertices), std::move(triangles));
}

Triangulation type1_diagonal(int n, double L) {
    if (n < 1) throw InputError("type1_diagonal needs n >= 1");
    if (!(L > 0)) throw InputError("type1_diagonal needs L > 0");
    std::vector<Vec2> vertices;
    auto corner = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) vertices.emplace_back(i * L, j * L);
    }
    std::vector<Tri> triangles;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int a = corner(i, j), b = corner(i + 1, j), d = corner(i + 1, j + 1), e = corner(i, j + 1);
            triangles.push_back({a, b, d});
            triangles.push_back({a, d, e});
        }
    }
    return make_triangulation(std::move(vertices), std::move(triangles));
}

Triangulation perturbed_grid(int n, std::uint64_t seed, double amplitude) {
    if (n < 1) throw InputError("perturbed_grid needs n >= 1");
    if (amplitude < 0 || amplitude >= 0.5) throw InputError("perturbed_grid amplitude must lie in [0, 0.5)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shift(-amplitude, amplitude);
    std::bernoulli_distribution flip(0.5);
    std::vector<Vec2> vertices;
    auto corner = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            Vec2 p(i, j);
            if (i > 0 && i < n && j > 0 && j < n) {
                const double dx = shift(rng);
                const double dy = shift(rng);
                p += Vec2(dx, dy);
            }
            vertices.push_back(p);
        }
    }
    std::vector<Tri> triangles;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int a = corner(i, j), b = corner(i + 1, j), d = corner(i + 1, j + 1), e = corner(i, j + 1);
            if (flip(rng)) {
                triangles.push_back({a, b, d});
                triangles.push_back({a, d, e});
            } else {
                triangles.push_back({a, b, e});
                triangles.push_back({b, d, e});
            }
        }
    }
    for (const Tri& t : triangles) {
        if (cross2(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]) <= 0) {
            throw InputError("perturbed_grid amplitude inverts a triangle");
        }
    }
    return make_triangulation(std::move(vertices), std::move(triangles));
}

Triangulation generate(std::string_view preset, const Params& params) {
    if (preset == "ngon" || preset == "ngon_patch") {
        NgonOptions opt;
        opt.N = params.N;
        opt.radius = params.radius;
        return ngon_patch(opt);
    }
    if (preset == "three_lines" || preset == "three-lines") return three_lines(params.n, params.L);
    if (preset == "crossed") return crossed(params.n, params.L);
    if (preset == "type1" || preset == "type1_diagonal") return type1_diagonal(params.n, params.L);
    if (preset == "perturbed" || preset == "perturbed_grid") {
        return perturbed_grid(params.n, params.seed, params.amplitude);
    }
    throw InputError("unknown mesh preset '" + std::string(preset) + "'");
}

}  // namespace generators

Triangulation transformed(const Triangulation& mesh, double scale, double rotation, const Vec2& shift) {
    Triangulation out = mesh;
    const double c = std::cos(rotation), s = std::sin(rotation);
    for (Vec2& p : out.vertices) {
        const Vec2 r(c * p.x() - s * p.y(), s * p.x() + c * p.y());
        p = scale * r + shift;
    }
    return out;
}

}  // namespace svstokes
