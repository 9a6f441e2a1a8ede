#include "svstokes/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "svstokes/edge_geometry.hpp"
#include "svstokes/errors.hpp"
#include "svstokes/quadrature.hpp"

namespace svstokes {

using poly::Cubic;
using poly::VectorCubic;

// ---- PatchField arithmetic --------------------------------------------------

PatchField& PatchField::operator+=(const PatchField& o) { return axpy(1.0, o); }
PatchField& PatchField::operator-=(const PatchField& o) { return axpy(-1.0, o); }

PatchField& PatchField::operator*=(double s) {
    for (auto& [t, v] : pieces) v *= s;
    return *this;
}

PatchField& PatchField::axpy(double a, const PatchField& o) {
    if (a == 0.0) return *this;
    for (const auto& [t, v] : o.pieces) {
        VectorCubic& dst = pieces[t];
        poly::axpy(dst.x, a, v.x);
        poly::axpy(dst.y, a, v.y);
    }
    return *this;
}

std::vector<int> PatchField::support() const {
    std::vector<int> s;
    for (const auto& [t, v] : pieces) {
        if (v.max_abs() > 0.0) s.push_back(t);
    }
    return s;
}

double PatchField::max_abs() const {
    double m = 0.0;
    for (const auto& [t, v] : pieces) m = std::max(m, v.max_abs());
    return m;
}

PatchField operator+(PatchField a, const PatchField& b) { return a += b; }
PatchField operator-(PatchField a, const PatchField& b) { return a -= b; }
PatchField operator*(double s, PatchField a) { return a *= s; }

namespace {

int slot_of(const MeshTopology& topo, int t, int v) {
    const int k = topo.slot(t, v);
    if (k < 0) throw InvariantViolation("vertex not in triangle");
    return k;
}

const Edge& interior_edge(const MeshTopology& topo, int edge, int z) {
    const Edge& e = topo.edge(edge);
    if (e.v[0] != z && e.v[1] != z) throw GeometryError("vertex is not an endpoint of the edge");
    if (e.boundary()) throw GeometryError("edge " + std::to_string(edge) + " is a boundary edge");
    return e;
}

double cot(double a) { return std::cos(a) / std::sin(a); }

double sign_pow(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

int spoke_edge(const MeshTopology& topo, const VertexPatch& p, int i) { return topo.find_edge(p.center, p.y(i)); }

void require_interior(const VertexPatch& p) {
    if (!p.interior) throw GeometryError("construction needs an interior vertex");
}

double div_scale(const MeshTopology& topo, const PatchField& f) {
    double s = 0.0;
    for (const auto& [t, v] : f.pieces) {
        const TriangleGeom& g = topo.geom(t);
        const double hmin = std::min({g.height[0], g.height[1], g.height[2]});
        s = std::max(s, v.max_abs() / hmin);
    }
    return s;
}

// v_1..v_N with Kronecker vertex divergence at z, grown from a seed at position k
// using the edge fields. Interior patches run clockwise from the seed so that the
// sign break of the alternation sits on spoke k.
std::vector<PatchField> kronecker_family(const MeshTopology& topo, const VertexPatch& p, const PatchField& seed,
                                         int k) {
    const int n = p.N();
    std::vector<PatchField> v(n);
    v[k - 1] = seed;
    if (p.interior) {
        int j = k;
        for (int step = 1; step < n; ++step) {
            const int prev = j;
            j = (j - 2 + n) % n + 1;  // j - 1 modulo N, 1-based
            v[j - 1] = basis_w(topo, p, j) - v[prev - 1];
        }
    } else {
        for (int j = k + 1; j <= n; ++j) v[j - 1] = basis_w(topo, p, j - 1) - v[j - 2];
        for (int j = k - 1; j >= 1; --j) v[j - 1] = basis_w(topo, p, j) - v[j];
    }
    return v;
}

// sign of the seed inside v_j, matching kronecker_family
double seed_sign(const VertexPatch& p, int k, int j) {
    if (p.interior) return sign_pow(((k - j) % p.N() + p.N()) % p.N());
    return sign_pow(std::abs(j - k));
}

PatchField combine(const std::vector<PatchField>& family, const std::vector<double>& a) {
    PatchField v;
    for (std::size_t j = 0; j < family.size(); ++j) v.axpy(a[j], family[j]);
    return v;
}

double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

// ---- scalar building blocks -------------------------------------------------

ScalarField eta(const MeshTopology& topo, int edge, int z) {
    const Edge& e = topo.edge(edge);
    if (e.v[0] != z && e.v[1] != z) throw GeometryError("vertex is not an endpoint of the edge");
    const int y = e.other(z);
    ScalarField f;
    for (int t : e.tris) f.pieces[t] = poly::sq_times(slot_of(topo, t, z), slot_of(topo, t, y));
    return f;
}

ScalarField kappa(const MeshTopology& topo, int edge, int z) {
    const Edge& e = interior_edge(topo, edge, z);
    const int y = e.other(z);
    ScalarField f;
    for (int t : e.tris) {
        const int a = slot_of(topo, t, z), b = slot_of(topo, t, y);
        Cubic c = poly::sq_times(a, b);
        poly::axpy(c, -0.5, poly::product(a, b));
        f.pieces[t] = c;
    }
    return f;
}

double edge_integral(const MeshTopology& topo, const ScalarField& f, int edge) {
    const Edge& e = topo.edge(edge);
    const int t = e.tris.front();
    auto it = f.pieces.find(t);
    if (it == f.pieces.end()) return 0.0;
    const int a = slot_of(topo, t, e.v[0]), b = slot_of(topo, t, e.v[1]);
    double s = 0.0;
    for (const auto& q : quadrature::edge_gauss5()) {
        Vec3 l = Vec3::Zero();
        l[a] = 1.0 - q.s;
        l[b] = q.s;
        s += q.weight * poly::eval(it->second, l);
    }
    return s * (topo.point(e.v[0]) - topo.point(e.v[1])).norm();
}

Vec2 scalar_gradient(const MeshTopology& topo, const ScalarField& f, int triangle, int vertex) {
    auto it = f.pieces.find(triangle);
    if (it == f.pieces.end()) return Vec2::Zero();
    return poly::gradient(it->second, topo.geom(triangle), Vec3::Unit(slot_of(topo, triangle, vertex)));
}

// ---- vector fields ----------------------------------------------------------

namespace {

PatchField times(const ScalarField& s, const Vec2& dir) {
    PatchField f;
    for (const auto& [t, c] : s.pieces) f.pieces[t] = poly::times(c, dir);
    return f;
}

}  // namespace

PatchField basis_w(const MeshTopology& topo, int edge, int z) {
    const Edge& e = interior_edge(topo, edge, z);
    const Vec2 d = topo.point(e.other(z)) - topo.point(z);  // |e| t_e^z
    return times(eta(topo, edge, z), d);
}

PatchField basis_w(const MeshTopology& topo, const VertexPatch& p, int i) {
    return basis_w(topo, spoke_edge(topo, p, i), p.center);
}

PatchField basis_chi(const MeshTopology& topo, const VertexPatch& p, int i) {
    require_interior(p);
    const int e = spoke_edge(topo, p, i);
    return times(eta(topo, e, p.center), 12.0 / p.len(i) * p.n(i));
}

PatchField basis_chi_sum(const MeshTopology& topo, const VertexPatch& p) {
    PatchField f;
    for (int i = 1; i <= p.N(); ++i) f += basis_chi(topo, p, i);
    return f;
}

PatchField basis_xi_tilde(const MeshTopology& topo, const VertexPatch& p, int i) {
    require_interior(p);
    if (i != 1 && i != 2) throw InputError("xi index must be 1 or 2");
    const Vec2 E = i == 1 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
    PatchField f;
    for (int t : p.tris) f.pieces[t] = poly::times(poly::square(slot_of(topo, t, p.center)), E);
    return f;
}

PatchField basis_xi(const MeshTopology& topo, const VertexPatch& p, int i, const DCoefficients& dc) {
    PatchField f = basis_xi_tilde(topo, p, i);
    for (int j = 1; j < p.N(); ++j) f.axpy(-dc.c[j - 1][i - 1], basis_chi(topo, p, j));
    return f;
}

PatchField kappa_field(const MeshTopology& topo, int edge, int z, const Vec2& dir) {
    return times(kappa(topo, edge, z), dir);
}

// ---- evaluation -------------------------------------------------------------

double eval_divergence_at_vertex(const MeshTopology& topo, const PatchField& f, int triangle, int vertex) {
    auto it = f.pieces.find(triangle);
    if (it == f.pieces.end()) throw InputError("triangle " + std::to_string(triangle) + " is outside the support");
    const int k = topo.slot(triangle, vertex);
    if (k < 0) throw InputError("vertex is not a corner of the triangle");
    return poly::vertex_value(poly::divergence(it->second, topo.geom(triangle)), k);
}

double vertex_divergence(const MeshTopology& topo, const PatchField& f, int triangle, int vertex) {
    if (!f.pieces.count(triangle)) return 0.0;
    return eval_divergence_at_vertex(topo, f, triangle, vertex);
}

std::vector<double> patch_divergence(const MeshTopology& topo, const PatchField& f, const VertexPatch& p) {
    std::vector<double> out(p.N());
    for (int j = 1; j <= p.N(); ++j) out[j - 1] = vertex_divergence(topo, f, p.tri(j), p.center);
    return out;
}

double triangle_integral_divergence(const MeshTopology& topo, const PatchField& f, int triangle) {
    auto it = f.pieces.find(triangle);
    if (it == f.pieces.end()) return 0.0;
    const TriangleGeom& g = topo.geom(triangle);
    const poly::Quadratic d = poly::divergence(it->second, g);
    return quadrature::integrate(g, [&](const Vec3& l) { return poly::eval(d, l); });
}

double triangle_mean_divergence(const MeshTopology& topo, const PatchField& f, int triangle) {
    return triangle_integral_divergence(topo, f, triangle) / topo.geom(triangle).area;
}

Vec2 eval_field(const MeshTopology&, const PatchField& f, int triangle, const Vec3& bary) {
    auto it = f.pieces.find(triangle);
    if (it == f.pieces.end()) return Vec2::Zero();
    return poly::eval(it->second, bary);
}

double max_gradient(const MeshTopology& topo, const PatchField& f, int k) {
    double m = 0.0;
    for (const auto& [t, v] : f.pieces) {
        const TriangleGeom& g = topo.geom(t);
        for (int i = 0; i <= k; ++i) {
            for (int j = 0; i + j <= k; ++j) {
                const Vec3 l(double(i) / k, double(j) / k, double(k - i - j) / k);
                m = std::max(m, poly::jacobian_norm(v, g, l));
            }
        }
    }
    return m;
}

// ---- interpolation ----------------------------------------------------------

PatchField local_interpolant(const MeshTopology& topo, const VertexPatch& p, const VertexReport& report,
                             const WTarget& target) {
    const int n = p.N();
    if (static_cast<int>(target.a.size()) != n) {
        throw InputError("target has " + std::to_string(target.a.size()) + " values, patch has " + std::to_string(n));
    }
    const std::vector<double>& a = target.a;
    switch (report.status) {
        case VertexClass::SingularLI: {
            const double A = alternating_sum(a);
            if (std::abs(A) > 1e-10 * std::max(max_abs(a), 1e-300) && max_abs(a) > 0.0) {
                throw InputError("target violates the alternating constraint at singular vertex " +
                                 std::to_string(p.center));
            }
            PatchField v;
            double b = 0.0;
            for (int j = 1; j < n; ++j) {
                b = a[j - 1] - b;
                v.axpy(b, basis_w(topo, p, j));
            }
            return v;
        }
        case VertexClass::OddLI: {
            PatchField seed;
            for (int j = 1; j <= n; ++j) seed.axpy(0.5 * sign_pow(j - 1), basis_w(topo, p, j));
            return combine(kronecker_family(topo, p, seed, 1), a);
        }
        case VertexClass::EvenLI: {
            const DCoefficients dc = compute_dcoefficients(p);
            const int i = report.chosen;
            PatchField xi;
            std::vector<double> d(n);
            if (i == 0) {
                xi = basis_chi_sum(topo, p);
                for (int j = 0; j < n; ++j) d[j] = 12.0 * dc.d0[j];
            } else {
                xi = basis_xi(topo, p, i, dc);
                for (int j = 0; j < n; ++j) d[j] = dc.d[j][i - 1];
            }
            double D = 0.0;
            for (int j = 1; j <= n; ++j) D += sign_pow(j) * d[j - 1];
            if (D == 0.0) throw ConstructionError("vanishing D at vertex " + std::to_string(p.center));
            // s_1 = 0, s_j = d_j - s_{j-1}
            PatchField seed = xi;
            double s = 0.0;
            for (int j = 2; j <= n; ++j) {
                s = d[j - 1] - s;
                seed.axpy(-s, basis_w(topo, p, j));
            }
            seed *= -1.0 / D;
            return combine(kronecker_family(topo, p, seed, 1), a);
        }
        case VertexClass::NotLI:
        case VertexClass::BoundaryNonSingular:
            break;
    }
    throw ConstructionError("vertex " + std::to_string(p.center) + " is not locally interpolating (" +
                            to_string(report.status) + ")");
}

BoundaryInterpolant boundary_interpolant(const MeshTopology& topo, const VertexPatch& p, const std::vector<double>& pv,
                                         double tol_singular) {
    const int n = p.N();
    if (p.interior) throw ConstructionError("boundary interpolation needs a boundary vertex");
    if (n < 2) throw ConstructionError("boundary vertex " + std::to_string(p.center) + " has a single triangle");
    if (static_cast<int>(pv.size()) != n) throw InputError("pressure values do not match the patch");
    if (theta(p) <= tol_singular) {
        throw ConstructionError("boundary vertex " + std::to_string(p.center) + " is singular");
    }
    int s = 0;
    double best = -1.0;
    for (int j = 1; j < n; ++j) {
        if (topo.on_boundary(p.y(j))) continue;
        const double v = std::abs(std::sin(p.theta(j) + p.theta(j + 1)));
        if (v > best * (1.0 + 1e-12)) {
            best = v;
            s = j;
        }
    }
    if (s == 0 || best <= tol_singular) {
        throw ConstructionError("no admissible pivot spoke at boundary vertex " + std::to_string(p.center));
    }
    const double coef = 2.0 * p.len(s) * std::sin(p.theta(s)) / std::sin(p.theta(s) + p.theta(s + 1));
    const PatchField seed = kappa_field(topo, spoke_edge(topo, p, s), p.center, coef * p.t(s + 1));

    BoundaryInterpolant out;
    out.pivot = s;
    out.polluted = p.y(s);
    out.field = combine(kronecker_family(topo, p, seed, s), pv);
    for (int t : topo.vertex_triangles(out.polluted)) {
        if (out.field.pieces.count(t)) out.spill[t] = vertex_divergence(topo, out.field, t, out.polluted);
    }
    return out;
}

EdgeTransfer edge_transfer(const MeshTopology& topo, int z, int edge, const std::vector<double>& a,
                           double tol_accept) {
    const EdgePair ep = edge_pair_geometry(topo, edge, z);
    const VertexPatch p = enumerate_patch(topo, z);
    if (static_cast<int>(a.size()) != p.N()) throw InputError("target does not match the patch at the edge origin");
    const int k = p.position(ep.first);
    if (k == 0 || p.y(k) != ep.y) throw InvariantViolation("edge is not spoke of the patch");

    EdgeTransfer out;
    out.z = z;
    out.y = ep.y;
    out.edge = edge;
    out.k1 = ep.first;
    out.k2 = ep.second;
    out.theta1 = ep.theta1;
    out.theta2 = ep.theta2;
    out.M = cot(ep.phi1) + cot(ep.phi2);
    if (std::abs(out.M) <= tol_accept) {
        throw ConstructionError("edge {" + std::to_string(z) + ", " + std::to_string(ep.y) +
                                "} is not acceptable: M vanishes");
    }
    // r = 2|e| kappa n, n normal to e out of the triangle before it
    PatchField seed = kappa_field(topo, edge, z, 2.0 * p.len(k) * p.n(k));
    seed.axpy(cot(ep.phi2), basis_w(topo, edge, z));
    seed *= 1.0 / out.M;

    out.field = combine(kronecker_family(topo, p, seed, k), a);
    out.s = 0.0;
    for (int j = 1; j <= p.N(); ++j) out.s += seed_sign(p, k, j) * a[j - 1];
    out.spill1 = vertex_divergence(topo, out.field, out.k1, out.y);
    out.spill2 = vertex_divergence(topo, out.field, out.k2, out.y);
    return out;
}

PathInterpolant path_interpolant(const MeshTopology& topo, const std::vector<int>& path, const std::vector<double>& a,
                                 double tol_accept) {
    if (path.size() < 2) throw InputError("a path needs at least one edge");
    std::set<int> seen(path.begin(), path.end());
    if (seen.size() != path.size()) throw InputError("path vertices must be distinct");
    std::vector<int> edges;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const int e = topo.find_edge(path[i - 1], path[i]);
        if (e < 0) throw InputError("path step is not a mesh edge");
        edges.push_back(e);
    }

    PathInterpolant out;
    out.path = path;
    std::vector<double> target = a;
    double rho_tilde = 1.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const EdgeTransfer tr = edge_transfer(topo, path[i], edges[i], target, tol_accept);
        if (i == 0) out.s = tr.s;
        out.field += tr.field;
        if (i + 1 == edges.size()) {
            out.k1 = tr.k1;
            out.k2 = tr.k2;
            out.spill1 = tr.spill1;
            out.spill2 = tr.spill2;
            out.predicted1 = std::abs(out.s) * std::abs(rho_tilde) * std::abs(cot(tr.theta1)) / std::abs(tr.M);
            out.predicted2 = std::abs(out.s) * std::abs(rho_tilde) * std::abs(cot(tr.theta2)) / std::abs(tr.M);
            break;
        }
        // cancel the spill at the next vertex
        const VertexPatch next = enumerate_patch(topo, path[i + 1]);
        target = patch_divergence(topo, tr.field, next);
        for (double& x : target) x = -x;
        rho_tilde *= (cot(tr.theta1) + cot(tr.theta2)) / tr.M;
    }
    return out;
}

// ---- verification -----------------------------------------------------------

bool FieldReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const FieldCheck& c) { return c.passed; });
}

std::string FieldReport::summary() const {
    std::ostringstream os;
    for (const FieldCheck& c : checks) {
        os << c.name << ": " << (c.passed ? "ok" : "FAIL") << " (deviation " << c.deviation << ")\n";
    }
    return os.str();
}

FieldReport verify_field(const MeshTopology& topo, const PatchField& f, const FieldExpectation& expect) {
    FieldReport rep;
    const double fscale = std::max(f.max_abs(), 1e-300);
    double expected_max = 0.0;
    for (const auto& [key, val] : expect.vertex_values) expected_max = std::max(expected_max, std::abs(val));
    const double dscale = std::max(div_scale(topo, f), expected_max);

    if (expect.support) {
        FieldCheck c{"support"};
        for (const auto& [t, v] : f.pieces) {
            if (!expect.support->count(t)) c.deviation = std::max(c.deviation, v.max_abs() / fscale);
        }
        c.passed = c.deviation <= expect.tol_zero;
        rep.checks.push_back(c);
    }

    {
        // Traces agree across every edge touching the support; the far side of a
        // support-boundary edge and the domain boundary count as zero.
        FieldCheck c{"continuity"};
        std::set<int> edges;
        for (const auto& [t, v] : f.pieces) {
            for (int e : topo.triangle_edges(t)) edges.insert(e);
        }
        for (int e : edges) {
            const Edge& ed = topo.edge(e);
            for (int q = 0; q < 4; ++q) {
                const double s = q / 3.0;
                Vec2 vals[2] = {Vec2::Zero(), Vec2::Zero()};
                for (std::size_t side = 0; side < ed.tris.size(); ++side) {
                    const int t = ed.tris[side];
                    Vec3 l = Vec3::Zero();
                    l[topo.slot(t, ed.v[0])] = 1.0 - s;
                    l[topo.slot(t, ed.v[1])] = s;
                    vals[side] = eval_field(topo, f, t, l);
                }
                c.deviation = std::max(c.deviation, (vals[0] - vals[1]).norm() / fscale);
            }
        }
        c.passed = c.deviation <= expect.tol_zero;
        rep.checks.push_back(c);
    }

    {
        FieldCheck c{"vertex divergence"};
        for (const auto& [t, v] : f.pieces) {
            for (int k = 0; k < 3; ++k) {
                const int vert = topo.triangle(t)[k];
                auto it = expect.vertex_values.find({t, vert});
                double expected = 0.0;
                if (it != expect.vertex_values.end()) {
                    expected = it->second;
                } else if (expect.free_vertices.count(vert)) {
                    continue;
                }
                const double got = eval_divergence_at_vertex(topo, f, t, vert);
                const double tol = expected == 0.0 ? expect.tol_zero : expect.tol;
                const double dev = std::abs(got - expected) / std::max(dscale, 1e-300);
                c.deviation = std::max(c.deviation, dev);
                if (dev > tol) c.passed = false;
            }
        }
        for (const auto& [key, val] : expect.vertex_values) {
            if (!f.pieces.count(key.first) && std::abs(val) > expect.tol * dscale) {
                c.passed = false;
                c.deviation = std::max(c.deviation, 1.0);
            }
        }
        rep.checks.push_back(c);
    }

    {
        FieldCheck c{expect.mean_zero ? "triangle means" : "triangle integrals"};
        for (const auto& [t, v] : f.pieces) {
            const double area = topo.geom(t).area;
            const double integ = triangle_integral_divergence(topo, f, t);
            double expected = 0.0;
            if (!expect.mean_zero) {
                auto it = expect.integrals.find(t);
                if (it != expect.integrals.end()) expected = it->second;
            }
            const double dev = std::abs(integ - expected) / std::max(dscale * area, std::abs(expected));
            c.deviation = std::max(c.deviation, dev);
        }
        c.passed = c.deviation <= expect.tol_zero * 10.0;
        rep.checks.push_back(c);
    }

    if (!expect.singular_vertices.empty()) {
        FieldCheck c{"singular constraint"};
        for (int sv : expect.singular_vertices) {
            const VertexPatch p = enumerate_patch(topo, sv);
            const std::vector<double> vals = patch_divergence(topo, f, p);
            c.deviation = std::max(c.deviation, std::abs(alternating_sum(vals)) / std::max(dscale, 1e-300));
        }
        c.passed = c.deviation <= expect.tol_zero;
        rep.checks.push_back(c);
    }
    return rep;
}

std::string field_to_json(const PatchField& f) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [t, v] : f.pieces) {
        j[std::to_string(t)] = {{"x", v.x}, {"y", v.y}};
    }
    return j.dump();
}

}  // namespace svstokes
