#include "svstokes/trees.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>
#include <tuple>

#include "svstokes/errors.hpp"

namespace svstokes {

namespace {

int class_rank(VertexClass c) { return c == VertexClass::EvenLI ? 1 : 0; }

bool has_boundary_pivot(const MeshTopology& topo, const VertexPatch& p, double tol) {
    for (int j = 1; j < p.N(); ++j) {
        if (!topo.on_boundary(p.y(j)) && std::abs(std::sin(p.theta(j) + p.theta(j + 1))) > tol) return true;
    }
    return false;
}

bool traversable(const MeshTopology& topo, int edge, int child, double tol) {
    return !topo.edge(edge).boundary() && std::abs(edge_weight(topo, edge, child)) > tol;
}

}  // namespace

Path path_stats(const MeshTopology& topo, const std::vector<int>& vertices, double tol_accept) {
    if (vertices.empty()) throw InputError("empty path");
    if (std::set<int>(vertices.begin(), vertices.end()).size() != vertices.size()) {
        throw InputError("path vertices must be distinct");
    }
    for (int v : vertices) {
        if (v < 0 || v >= topo.num_vertices()) throw InputError("path vertex out of range");
    }
    Path p;
    p.vertices = vertices;
    p.rho_tilde.push_back(1.0);
    p.min_weight = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        const int e = topo.find_edge(vertices[i - 1], vertices[i]);
        if (e < 0) {
            throw InputError("vertices " + std::to_string(vertices[i - 1]) + " and " + std::to_string(vertices[i]) +
                             " are not joined by an edge");
        }
        if (topo.edge(e).boundary()) {
            throw InputError("path uses boundary edge {" + std::to_string(vertices[i - 1]) + ", " +
                             std::to_string(vertices[i]) + "}");
        }
        const double mf = edge_weight(topo, e, vertices[i - 1]);
        const double mt = edge_weight(topo, e, vertices[i]);
        p.edges.push_back(e);
        p.M_from.push_back(mf);
        p.M_to.push_back(mt);
        p.rho.push_back(p.rho_tilde.back() / mf);
        p.rho_tilde.push_back(p.rho_tilde.back() * mt / mf);
        p.min_weight = std::min(p.min_weight, std::abs(mf));
    }
    if (p.edges.empty()) {
        p.min_weight = 0.0;
        p.acceptable = true;
        p.rho_max = 1.0;
        return p;
    }
    p.acceptable = p.min_weight > tol_accept;
    p.rho_max = 0.0;
    for (double r : p.rho) p.rho_max = std::max(p.rho_max, std::abs(r));
    return p;
}

std::vector<int> Tree::vertices() const {
    std::vector<int> out;
    for (const auto& l : levels) out.insert(out.end(), l.begin(), l.end());
    return out;
}

std::vector<int> Tree::path_to_root(int v) const {
    std::vector<int> out{v};
    while (v != root) {
        auto it = parent.find(v);
        if (it == parent.end()) throw InputError("vertex " + std::to_string(v) + " is not in the tree");
        v = it->second;
        out.push_back(v);
    }
    return out;
}

TreeStats tree_stats(const MeshTopology& topo, const Tree& tree, double tol_accept) {
    TreeStats s;
    s.depth = tree.depth();
    for (const auto& l : tree.levels) s.level_sizes.push_back(static_cast<int>(l.size()));
    const std::vector<int> verts = tree.vertices();
    s.size = static_cast<int>(verts.size());

    // descendant counts, deepest level first
    std::map<int, int> desc;
    for (int v : verts) desc[v] = 0;
    for (auto l = tree.levels.rbegin(); l != tree.levels.rend(); ++l) {
        for (int v : *l) {
            if (v != tree.root) desc[tree.parent.at(v)] += desc[v] + 1;
        }
    }
    double ups2 = 0.0;
    bool any = false;
    double rho = 0.0;
    for (int v : verts) {
        if (v == tree.root) continue;
        const std::vector<int> path = tree.path_to_root(v);
        double sum = 0.0;
        for (std::size_t i = 1; i < path.size(); ++i) sum += desc[path[i]];
        ups2 = std::max(ups2, sum);
        rho = std::max(rho, path_stats(topo, path, tol_accept).rho_max);
        any = true;
    }
    s.upsilon = std::sqrt(ups2);
    s.rho = any ? rho : 1.0;
    return s;
}

TreeCover build_tree_cover(const MeshTopology& topo, const MeshClassification& mc, const Tolerances& tol) {
    const int nv = topo.num_vertices();
    TreeCover cover;
    cover.owner.assign(nv, -1);
    std::vector<double> rho(nv, 0.0);  // rho of the path from the vertex to its root

    for (int v = 0; v < nv; ++v) {
        if (!in_lh(mc.reports[v].status)) continue;
        Tree t;
        t.root = v;
        t.root_class = mc.reports[v].status;
        t.levels.push_back({v});
        cover.owner[v] = static_cast<int>(cover.trees.size());
        cover.trees.push_back(std::move(t));
        rho[v] = 1.0;
    }

    std::vector<int> frontier;
    for (const Tree& t : cover.trees) frontier.push_back(t.root);
    for (int level = 1; !frontier.empty(); ++level) {
        // best (rho, class rank, root, parent, edge) per newly reached vertex
        std::map<int, std::tuple<double, int, int, int, int>> best;
        for (int parent : frontier) {
            const Tree& tr = cover.trees[cover.owner[parent]];
            const std::vector<int> up = tr.path_to_root(parent);
            for (int e : topo.vertex_edges(parent)) {
                const int child = topo.edge(e).other(parent);
                if (cover.owner[child] >= 0 || !traversable(topo, e, child, tol.accept)) continue;
                std::vector<int> path{child};
                path.insert(path.end(), up.begin(), up.end());
                const double r = path_stats(topo, path, tol.accept).rho_max;
                const auto cand = std::make_tuple(r, class_rank(tr.root_class), tr.root, parent, e);
                auto it = best.find(child);
                if (it == best.end()) {
                    best[child] = cand;
                    continue;
                }
                const auto& cur = it->second;
                const double r0 = std::get<0>(cur);
                const bool tie = std::abs(r - r0) <= 1e-9 * std::max(r, r0);
                if ((!tie && r < r0) ||
                    (tie && std::make_tuple(std::get<1>(cand), std::get<2>(cand), std::get<3>(cand)) <
                                std::make_tuple(std::get<1>(cur), std::get<2>(cur), std::get<3>(cur)))) {
                    it->second = cand;
                }
            }
        }
        frontier.clear();
        for (const auto& [child, c] : best) {
            const int ti = cover.owner[std::get<3>(c)];
            Tree& tr = cover.trees[ti];
            if (static_cast<int>(tr.levels.size()) <= level) tr.levels.resize(level + 1);
            tr.levels[level].push_back(child);
            tr.parent[child] = std::get<3>(c);
            tr.parent_edge[child] = std::get<4>(c);
            cover.owner[child] = ti;
            rho[child] = std::get<0>(c);
            frontier.push_back(child);
        }
    }

    for (int v = 0; v < nv; ++v) {
        if (cover.owner[v] >= 0) continue;
        const VertexPatch p = enumerate_patch(topo, v);
        if (p.interior || (mc.reports[v].status == VertexClass::BoundaryNonSingular &&
                           !has_boundary_pivot(topo, p, tol.singular))) {
            cover.uncovered.push_back(v);
        }
    }
    cover.complete = cover.uncovered.empty();
    return cover;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::AllInteriorLocal: return "all_interior_local";
        case Verdict::TreeCover: return "tree_cover";
        case Verdict::AcceptablePaths: return "acceptable_paths";
        case Verdict::None: return "none";
    }
    return "none";
}

HypothesisCheck check_hypotheses(const MeshTopology& topo, const MeshClassification& mc, const TreeCover& cover,
                                 const Tolerances& tol) {
    HypothesisCheck h;
    const int nv = topo.num_vertices();

    // reachability ignores disjointness: search outward from all roots
    h.reachable.assign(nv, false);
    std::deque<int> queue;
    for (int v = 0; v < nv; ++v) {
        if (in_lh(mc.reports[v].status)) {
            h.reachable[v] = true;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int e : topo.vertex_edges(u)) {
            const int w = topo.edge(e).other(u);
            if (!h.reachable[w] && traversable(topo, e, w, tol.accept)) {
                h.reachable[w] = true;
                queue.push_back(w);
            }
        }
    }

    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (int t = 0; t < topo.num_triangles(); ++t) {
        const double d = topo.geom(t).diameter();
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    h.quasi_uniformity = dmax / dmin;
    h.upsilon_bar = 0.0;
    h.rho_bar = 1.0;
    for (const Tree& t : cover.trees) {
        const TreeStats s = tree_stats(topo, t, tol.accept);
        h.rho_bar = std::max(h.rho_bar, s.rho);
        h.upsilon_bar = std::max(h.upsilon_bar, s.upsilon);
    }

    bool all_local = true;
    int interior = 0, unreachable = 0;
    for (int v = 0; v < nv; ++v) {
        if (!mc.reports[v].interior) continue;
        ++interior;
        if (!in_lh(mc.reports[v].status)) all_local = false;
        if (!h.reachable[v]) ++unreachable;
    }
    std::ostringstream os;
    if (all_local && cover.complete) {
        h.verdict = Verdict::AllInteriorLocal;
        os << "all " << interior << " interior vertices are locally interpolating";
    } else if (cover.complete) {
        h.verdict = Verdict::TreeCover;
        os << cover.trees.size() << " disjoint acceptable trees cover the vertices; rho_bar " << h.rho_bar
           << ", upsilon_bar " << h.upsilon_bar;
    } else if (unreachable == 0 && cover.uncovered.empty()) {
        h.verdict = Verdict::AcceptablePaths;
        os << "every interior vertex has an acceptable path to a root";
    } else {
        h.verdict = Verdict::None;
        os << cover.uncovered.size() << " vertices are not covered";
        if (unreachable > 0) os << "; " << unreachable << " interior vertices reach no root";
    }
    os << "; quasi-uniformity ratio " << h.quasi_uniformity;
    h.narrative = os.str();
    return h;
}

VertexValues divergence_vertex_values(const MeshTopology& topo, const PatchField& f) {
    VertexValues out(topo.num_triangles(), {0.0, 0.0, 0.0});
    for (const auto& [t, v] : f.pieces) {
        const poly::Quadratic d = poly::divergence(v, topo.geom(t));
        for (int k = 0; k < 3; ++k) out[t][k] = poly::vertex_value(d, k);
    }
    return out;
}

PatchField tree_interpolant(const MeshTopology& topo, const MeshClassification& mc, const TreeCover& cover,
                            const VertexValues& p, const Tolerances& tol) {
    if (static_cast<int>(p.size()) != topo.num_triangles()) throw InputError("pressure data does not match the mesh");
    const int nv = topo.num_vertices();
    double pscale = 0.0;
    for (const auto& a : p) {
        for (double x : a) pscale = std::max(pscale, std::abs(x));
    }
    PatchField v;
    if (pscale == 0.0) return v;

    std::vector<VertexPatch> patches;
    patches.reserve(nv);
    for (int z = 0; z < nv; ++z) patches.push_back(enumerate_patch(topo, z));

    auto values_at = [&](const VertexPatch& pt, const VertexValues& src) {
        std::vector<double> a(pt.N());
        for (int j = 1; j <= pt.N(); ++j) a[j - 1] = src[pt.tri(j)][topo.slot(pt.tri(j), pt.center)];
        return a;
    };
    auto residual_at = [&](const VertexPatch& pt) {
        std::vector<double> a = values_at(pt, p);
        for (int j = 1; j <= pt.N(); ++j) a[j - 1] -= vertex_divergence(topo, v, pt.tri(j), pt.center);
        return a;
    };

    for (int z = 0; z < nv; ++z) {
        if (!mc.reports[z].singular) continue;
        const double A = alternating_sum(values_at(patches[z], p));
        if (std::abs(A) > 1e-9 * pscale) {
            throw InputError("pressure violates the alternating constraint at singular vertex " + std::to_string(z));
        }
    }

    std::vector<bool> done(nv, false);
    // boundary vertices first: their construction pollutes one interior neighbour
    for (int z = 0; z < nv; ++z) {
        const VertexReport& r = mc.reports[z];
        if (r.interior || r.status != VertexClass::BoundaryNonSingular) continue;
        if (!has_boundary_pivot(topo, patches[z], tol.singular)) continue;
        v += boundary_interpolant(topo, patches[z], residual_at(patches[z]), tol.singular).field;
        done[z] = true;
    }
    // remaining non-root vertices push their residual to the root
    for (int z = 0; z < nv; ++z) {
        if (done[z] || in_lh(mc.reports[z].status)) continue;
        const int ti = cover.owner[z];
        if (ti < 0) throw ConstructionError("vertex " + std::to_string(z) + " is not covered by any tree");
        const std::vector<double> a = residual_at(patches[z]);
        double amax = 0.0;
        for (double x : a) amax = std::max(amax, std::abs(x));
        if (amax > 0.0) v += path_interpolant(topo, cover.trees[ti].path_to_root(z), a, tol.accept).field;
        done[z] = true;
    }
    // roots absorb what arrived
    for (int z = 0; z < nv; ++z) {
        if (!in_lh(mc.reports[z].status)) continue;
        std::vector<double> a = residual_at(patches[z]);
        if (mc.reports[z].singular) a[0] -= alternating_sum(a);  // remove rounding drift
        double amax = 0.0;
        for (double x : a) amax = std::max(amax, std::abs(x));
        if (amax > 0.0) v += local_interpolant(topo, patches[z], mc.reports[z], {z, a});
    }
    return v;
}

}  // namespace svstokes
