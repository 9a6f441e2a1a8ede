#include "svstokes/suites.hpp"

#include <cmath>
#include <random>

#include "svstokes/edge_geometry.hpp"
#include "svstokes/errors.hpp"
#include "svstokes/fields.hpp"
#include "svstokes/trees.hpp"

namespace svstokes {

namespace {

double cot(double a) { return std::cos(a) / std::sin(a); }

class Recorder {
public:
    explicit Recorder(std::string name) { r_.name = std::move(name); }

    void add(bool ok, double deviation, const std::string& what) {
        ++r_.cases;
        r_.max_deviation = std::max(r_.max_deviation, deviation);
        if (!ok) {
            ++r_.failures;
            if (r_.messages.size() < 5) r_.messages.push_back(what);
        }
    }

    void add(const FieldReport& rep, const std::string& what) {
        double dev = 0.0;
        for (const FieldCheck& c : rep.checks) dev = std::max(dev, c.deviation);
        add(rep.passed(), dev, what + ": " + rep.summary());
    }

    void error(const std::string& what) { add(false, 0.0, what); }

    SuiteResult result() && { return std::move(r_); }

private:
    SuiteResult r_;
};

std::vector<double> random_values(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(n);
    for (double& x : a) x = u(rng);
    return a;
}

FieldExpectation patch_expectation(const VertexPatch& p, const std::vector<double>& a) {
    FieldExpectation e;
    for (int j = 1; j <= p.N(); ++j) e.vertex_values[{p.tri(j), p.center}] = a[j - 1];
    e.support = std::set<int>(p.tris.begin(), p.tris.end());
    return e;
}

std::string at(int z) { return "vertex " + std::to_string(z); }

SuiteResult suite_w(const MeshTopology& topo) {
    Recorder rec("w");
    for (int e = 0; e < topo.num_edges(); ++e) {
        const Edge& ed = topo.edge(e);
        if (ed.boundary()) continue;
        for (int z : ed.v) {
            FieldExpectation ex;
            for (int t : ed.tris) ex.vertex_values[{t, z}] = 1.0;
            ex.support = std::set<int>(ed.tris.begin(), ed.tris.end());
            rec.add(verify_field(topo, basis_w(topo, e, z), ex), "edge " + std::to_string(e) + " at " + at(z));
        }
    }
    return std::move(rec).result();
}

SuiteResult suite_chi(const MeshTopology& topo) {
    Recorder rec("chi");
    for (int z = 0; z < topo.num_vertices(); ++z) {
        const VertexPatch p = enumerate_patch(topo, z);
        if (!p.interior) continue;
        for (int i = 1; i <= p.N(); ++i) {
            const double l2 = p.len(i) * p.len(i);
            FieldExpectation ex;
            ex.vertex_values[{p.tri(i), z}] = 12.0 * cot(p.theta(i)) / l2;
            ex.vertex_values[{p.tri(i + 1), z}] = -12.0 * cot(p.theta(i + 1)) / l2;
            ex.mean_zero = false;
            ex.integrals = {{p.tri(i), 1.0}, {p.tri(i + 1), -1.0}};
            ex.support = std::set<int>{p.tri(i), p.tri(i + 1)};
            rec.add(verify_field(topo, basis_chi(topo, p, i), ex), "chi_" + std::to_string(i) + " at " + at(z));
        }
        const DCoefficients dc = compute_dcoefficients(p);
        std::vector<double> d(p.N());
        for (int j = 0; j < p.N(); ++j) d[j] = 12.0 * dc.d0[j];
        rec.add(verify_field(topo, basis_chi_sum(topo, p), patch_expectation(p, d)), "chi at " + at(z));
    }
    return std::move(rec).result();
}

void suite_xi(const MeshTopology& topo, std::vector<SuiteResult>& out) {
    Recorder tilde("xi_tilde"), xi("xi");
    for (int z = 0; z < topo.num_vertices(); ++z) {
        const VertexPatch p = enumerate_patch(topo, z);
        if (!p.interior) continue;
        const DCoefficients dc = compute_dcoefficients(p);
        for (int i = 1; i <= 2; ++i) {
            FieldExpectation et;
            et.free_vertices = {z};
            et.mean_zero = false;
            for (int j = 1; j <= p.N(); ++j) et.integrals[p.tri(j)] = dc.b[j - 1][i - 1];
            et.support = std::set<int>(p.tris.begin(), p.tris.end());
            tilde.add(verify_field(topo, basis_xi_tilde(topo, p, i), et), "xi~_" + std::to_string(i) + " at " + at(z));

            std::vector<double> d(p.N());
            for (int j = 0; j < p.N(); ++j) d[j] = dc.d[j][i - 1];
            xi.add(verify_field(topo, basis_xi(topo, p, i, dc), patch_expectation(p, d)),
                   "xi_" + std::to_string(i) + " at " + at(z));
        }
    }
    out.push_back(std::move(tilde).result());
    out.push_back(std::move(xi).result());
}

SuiteResult suite_kappa(const MeshTopology& topo) {
    Recorder rec("kappa");
    for (int e = 0; e < topo.num_edges(); ++e) {
        const Edge& ed = topo.edge(e);
        if (ed.boundary()) continue;
        const double len = (topo.point(ed.v[0]) - topo.point(ed.v[1])).norm();
        for (int z : ed.v) {
            const double m = edge_integral(topo, kappa(topo, e, z), e);
            rec.add(std::abs(m) <= 1e-12 * len, std::abs(m) / len, "edge mean of kappa on edge " + std::to_string(e));

            const EdgePair ep = edge_pair_geometry(topo, e, z);
            const VertexPatch p = enumerate_patch(topo, z);
            const int k = p.position(ep.first);
            const PatchField r = kappa_field(topo, e, z, 2.0 * p.len(k) * p.n(k));
            FieldExpectation ex;
            ex.vertex_values[{ep.first, z}] = cot(ep.phi1);
            ex.vertex_values[{ep.second, z}] = -cot(ep.phi2);
            ex.free_vertices = {ep.y};
            ex.support = std::set<int>{ep.first, ep.second};
            rec.add(verify_field(topo, r, ex), "kappa field on edge " + std::to_string(e) + " at " + at(z));
        }
    }
    return std::move(rec).result();
}

SuiteResult suite_local(const MeshTopology& topo, const MeshClassification& mc, const SuiteOptions& opt,
                        std::mt19937_64& rng) {
    Recorder rec("local");
    for (int z = 0; z < topo.num_vertices(); ++z) {
        const VertexReport& r = mc.reports[z];
        if (!in_lh(r.status)) continue;
        const VertexPatch p = enumerate_patch(topo, z);
        for (int s = 0; s < opt.samples; ++s) {
            std::vector<double> a = random_values(p.N(), rng);
            if (r.singular) a[0] -= alternating_sum(a);
            try {
                PatchField v = local_interpolant(topo, p, r, {z, a});
                if (opt.corrupt && p.interior) v.axpy(1e-3, basis_w(topo, p, 1));
                rec.add(verify_field(topo, v, patch_expectation(p, a)), "local at " + at(z));
            } catch (const std::exception& ex) {
                rec.error("local at " + at(z) + ": " + ex.what());
            }
        }
    }
    return std::move(rec).result();
}

SuiteResult suite_boundary(const MeshTopology& topo, const MeshClassification& mc, const SuiteOptions& opt,
                           std::mt19937_64& rng) {
    Recorder rec("boundary");
    for (int z = 0; z < topo.num_vertices(); ++z) {
        if (mc.reports[z].status != VertexClass::BoundaryNonSingular) continue;
        const VertexPatch p = enumerate_patch(topo, z);
        bool pivot = false;
        for (int j = 1; j < p.N(); ++j) pivot = pivot || !topo.on_boundary(p.y(j));
        if (!pivot) continue;
        for (int s = 0; s < opt.samples; ++s) {
            const std::vector<double> a = random_values(p.N(), rng);
            try {
                const BoundaryInterpolant b = boundary_interpolant(topo, p, a, opt.tol.singular);
                FieldExpectation ex = patch_expectation(p, a);
                ex.free_vertices = {b.polluted};
                rec.add(verify_field(topo, b.field, ex), "boundary at " + at(z));
            } catch (const ConstructionError&) {
                // every admissible pivot is degenerate; nothing to verify
            }
        }
    }
    return std::move(rec).result();
}

SuiteResult suite_transfer(const MeshTopology& topo, const SuiteOptions& opt, std::mt19937_64& rng) {
    Recorder rec("transfer");
    for (int e = 0; e < topo.num_edges(); ++e) {
        const Edge& ed = topo.edge(e);
        if (ed.boundary()) continue;
        for (int z : ed.v) {
            if (std::abs(edge_weight(topo, e, z)) <= opt.tol.accept) continue;
            const VertexPatch p = enumerate_patch(topo, z);
            const std::vector<double> a = random_values(p.N(), rng);
            const EdgeTransfer tr = edge_transfer(topo, z, e, a, opt.tol.accept);
            FieldExpectation ex = patch_expectation(p, a);
            ex.support.reset();
            ex.vertex_values[{tr.k1, tr.y}] = -tr.s * cot(tr.theta1) / tr.M;
            ex.vertex_values[{tr.k2, tr.y}] = tr.s * cot(tr.theta2) / tr.M;
            rec.add(verify_field(topo, tr.field, ex), "transfer on edge " + std::to_string(e) + " from " + at(z));
        }
    }
    return std::move(rec).result();
}

SuiteResult suite_path(const MeshTopology& topo, const SuiteOptions& opt, std::mt19937_64& rng) {
    Recorder rec("path");
    const int hops = 3;
    for (int z = 0; z < topo.num_vertices(); ++z) {
        for (int s = 0; s < std::max(1, opt.samples / 5); ++s) {
            // random acceptable walk without repeated vertices
            std::vector<int> path{z};
            while (static_cast<int>(path.size()) <= hops) {
                std::vector<int> next;
                for (int e : topo.vertex_edges(path.back())) {
                    const int y = topo.edge(e).other(path.back());
                    if (topo.edge(e).boundary() || std::find(path.begin(), path.end(), y) != path.end()) continue;
                    if (std::abs(edge_weight(topo, e, path.back())) > opt.tol.accept) next.push_back(y);
                }
                if (next.empty()) break;
                path.push_back(next[rng() % next.size()]);
            }
            if (static_cast<int>(path.size()) != hops + 1) continue;
            const VertexPatch p = enumerate_patch(topo, z);
            const std::vector<double> a = random_values(p.N(), rng);
            const PathInterpolant pi = path_interpolant(topo, path, a, opt.tol.accept);
            const double d1 = std::abs(std::abs(pi.spill1) - pi.predicted1);
            const double d2 = std::abs(std::abs(pi.spill2) - pi.predicted2);
            const double scale = std::max({pi.predicted1, pi.predicted2, 1.0});
            rec.add(std::max(d1, d2) <= 1e-9 * scale, std::max(d1, d2) / scale, "path spill from " + at(z));
            FieldExpectation ex = patch_expectation(p, a);
            ex.support.reset();
            ex.free_vertices = {path.back()};
            rec.add(verify_field(topo, pi.field, ex), "path field from " + at(z));
        }
    }
    return std::move(rec).result();
}

SuiteResult suite_tree(const MeshTopology& topo, const MeshClassification& mc, const SuiteOptions& opt,
                       std::mt19937_64& rng) {
    Recorder rec("tree");
    const TreeCover cover = build_tree_cover(topo, mc, opt.tol);
    if (!cover.complete) return std::move(rec).result();
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int rounds = std::min(opt.samples, 3);
    for (int s = 0; s < rounds; ++s) {
        PatchField f;
        for (int e = 0; e < topo.num_edges(); ++e) {
            if (topo.edge(e).boundary()) continue;
            for (int z : topo.edge(e).v) {
                f.axpy(u(rng), basis_w(topo, e, z));
                f += kappa_field(topo, e, z, Vec2(u(rng), u(rng)));
            }
        }
        const VertexValues p = divergence_vertex_values(topo, f);
        try {
            const PatchField v = tree_interpolant(topo, mc, cover, p, opt.tol);
            FieldExpectation ex;
            for (int t = 0; t < topo.num_triangles(); ++t) {
                for (int k = 0; k < 3; ++k) ex.vertex_values[{t, topo.triangle(t)[k]}] = p[t][k];
            }
            rec.add(verify_field(topo, v, ex), "tree round trip " + std::to_string(s));
        } catch (const std::exception& ex) {
            rec.error(std::string("tree round trip: ") + ex.what());
        }
    }
    return std::move(rec).result();
}

}  // namespace

std::vector<SuiteResult> run_field_suites(const MeshTopology& topo, const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    const MeshClassification mc = classify_mesh(topo, opt.tol);
    std::vector<SuiteResult> out;
    out.push_back(suite_w(topo));
    out.push_back(suite_chi(topo));
    suite_xi(topo, out);
    out.push_back(suite_kappa(topo));
    out.push_back(suite_local(topo, mc, opt, rng));
    out.push_back(suite_boundary(topo, mc, opt, rng));
    out.push_back(suite_transfer(topo, opt, rng));
    out.push_back(suite_path(topo, opt, rng));
    if (opt.trees) out.push_back(suite_tree(topo, mc, opt, rng));
    return out;
}

nlohmann::json suites_json(const std::vector<SuiteResult>& suites, const SuiteOptions& opt) {
    nlohmann::json list = nlohmann::json::array();
    bool passed = true;
    for (const SuiteResult& s : suites) {
        passed = passed && s.passed();
        list.push_back({{"name", s.name},
                        {"cases", s.cases},
                        {"failures", s.failures},
                        {"max_deviation", s.max_deviation},
                        {"messages", s.messages}});
    }
    return {{"passed", passed}, {"seed", opt.seed}, {"samples", opt.samples}, {"suites", list}};
}

}  // namespace svstokes
