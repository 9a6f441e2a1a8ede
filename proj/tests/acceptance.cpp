// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "support.hpp"
#include "svstokes/classify.hpp"
#include "svstokes/fields.hpp"
#include "svstokes/solver.hpp"
#include "svstokes/suites.hpp"
#include "svstokes/trees.hpp"

using namespace svstokes;
using std::numbers::pi;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;
    std::vector<std::string> problems;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (problems.size() < 5) problems.push_back(what);
        }
    }
};

double cot(double a) { return std::cos(a) / std::sin(a); }

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

std::vector<double> random_values(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(n);
    for (double& x : a) x = u(rng);
    return a;
}

FieldExpectation kronecker(const VertexPatch& p, const std::vector<double>& a) {
    FieldExpectation e;
    for (int j = 1; j <= p.N(); ++j) e.vertex_values[{p.tri(j), p.center}] = a[j - 1];
    e.support = std::set<int>(p.tris.begin(), p.tris.end());
    return e;
}

DivergenceAnalysis solve(const MeshTopology& topo, SolverOptions opt = {}) {
    return analyze_divergence(topo, classify_mesh(topo, {}), opt);
}

MeshTopology preset(const char* name, int n) {
    generators::Params p;
    p.n = n;
    return MeshTopology(generators::generate(name, p));
}

const char* kSquare = "vertices 4\n0 0\n1 0\n1 1\n0 1\ntriangles 2\n0 1 2\n0 2 3\n";

// 1 ---------------------------------------------------------------------------
void field_lemmas(Outcome& out) {
    std::mt19937_64 rng(101);
    const std::set<std::string> lemmas{"w", "chi", "xi_tilde", "xi", "kappa"};
    int cases = 0;
    double dev = 0.0;
    for (int it = 0; it < 100; ++it) {
        const int N = 3 + static_cast<int>(rng() % 6);
        const MeshTopology topo(svtest::random_patch(N, rng));
        SuiteOptions opt;
        opt.samples = 1;
        opt.seed = it;
        opt.trees = false;
        for (const SuiteResult& s : run_field_suites(topo, opt)) {
            if (!lemmas.count(s.name)) continue;
            cases += s.cases;
            dev = std::max(dev, s.max_deviation);
            out.require(s.passed(), "patch " + std::to_string(it) + " " + s.name +
                                        (s.messages.empty() ? "" : ": " + s.messages.front()));
        }
    }
    out.detail << cases << " field checks on 100 patches, max deviation " << dev;
}

// 2 ---------------------------------------------------------------------------
void local_interpolants(Outcome& out) {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto run = [&](const MeshTopology& topo, int z, VertexClass expected, const std::string& label) {
        const VertexPatch p = enumerate_patch(topo, z);
        const VertexReport r = classify_vertex(p, {});
        out.require(r.status == expected, label + " classified as " + to_string(r.status));
        std::vector<double> a = random_values(p.N(), rng);
        if (r.singular) a[0] -= alternating_sum(a);
        const FieldReport rep = verify_field(topo, local_interpolant(topo, p, r, {z, a}), kronecker(p, a));
        out.require(rep.passed(), label + ": " + rep.summary());
    };

    for (int s = 0; s < 50; ++s) {
        // two crossing lines with random spoke lengths
        generators::NgonOptions o;
        o.N = 4;
        const double t0 = 0.3 * u(rng), t1 = 0.3 * u(rng);
        o.angle_offset = {t0, t1, t0, t1};
        for (int k = 0; k < 4; ++k) o.length_factor.push_back(1.0 + 0.3 * u(rng));
        run(MeshTopology(generators::ngon_patch(o)), 0, VertexClass::SingularLI, "N=4");
    }
    for (int N : {3, 5, 7}) {
        for (int s = 0; s < 50; ++s) {
            run(MeshTopology(svtest::random_patch(N, rng)), 0, VertexClass::OddLI, "N=" + std::to_string(N));
        }
    }
    const MeshTopology crossed = preset("crossed", 2);
    int z8 = -1;
    for (int z = 0; z < crossed.num_vertices(); ++z) {
        const VertexPatch p = enumerate_patch(crossed, z);
        if (p.interior && p.N() == 8) z8 = z;
    }
    out.require(z8 >= 0, "crossed mesh has no 8-valent vertex");
    if (z8 >= 0) {
        for (int s = 0; s < 50; ++s) run(crossed, z8, VertexClass::EvenLI, "crossed N=8");
    }
    out.detail << "50 targets each for N=4 singular, N=3,5,7 odd and the crossed 8-valent vertex";
}

// 3 ---------------------------------------------------------------------------
double d0_from_coordinates(const MeshTopology& topo, int z) {
    const VertexPatch p = enumerate_patch(topo, z);
    double s = 0.0;
    for (int j = 1; j <= p.N(); ++j) {
        const Vec2 a = topo.point(p.y(j - 1)) - topo.point(z);
        const Vec2 b = topo.point(p.y(j)) - topo.point(z);
        const double th = std::acos(a.dot(b) / (a.norm() * b.norm()));
        s += ((j % 2 == 0) ? 1.0 : -1.0) * cot(th) * (1.0 / b.squaredNorm() - 1.0 / a.squaredNorm());
    }
    return s;
}

void d_regression(Outcome& out) {
    double worst_zero = 0.0, worst_crossed = 0.0;
    auto vanishing = [&](const MeshTopology& topo, const std::string& label) {
        int n = 0;
        for (int z = 0; z < topo.num_vertices(); ++z) {
            const VertexPatch p = enumerate_patch(topo, z);
            if (!p.interior) continue;
            ++n;
            const DCoefficients dc = compute_dcoefficients(p);
            for (double s : dc.scaled) {
                worst_zero = std::max(worst_zero, s);
                out.require(s < 1e-10, label + " vertex " + std::to_string(z) + " |D|h^s = " + std::to_string(s));
            }
        }
        out.require(n > 0, label + " has no interior vertex");
    };
    vanishing(MeshTopology(generators::ngon_patch({})), "hexagon");
    vanishing(preset("three_lines", 3), "three_lines");
    vanishing(preset("type1", 4), "type1");

    int eight = 0;
    for (double L : {1.0, 0.37, 4.0}) {
        const MeshTopology topo(generators::crossed(3, L));
        for (int z = 0; z < topo.num_vertices(); ++z) {
            const VertexPatch p = enumerate_patch(topo, z);
            if (!p.interior || p.N() != 8) continue;
            ++eight;
            double lmin = 1e300;
            for (int j = 1; j <= 8; ++j) lmin = std::min(lmin, p.len(j));
            const double expected = 4.0 / (lmin * lmin);
            const double e1 = rel(std::abs(compute_dcoefficients(p).D[0]), expected);
            const double e2 = rel(std::abs(d0_from_coordinates(topo, z)), expected);
            worst_crossed = std::max({worst_crossed, e1, e2});
            out.require(e1 < 1e-10 && e2 < 1e-10, "crossed |D0| off by " + std::to_string(std::max(e1, e2)));
        }
    }
    out.require(eight == 12, "expected 12 crossed 8-valent vertices, saw " + std::to_string(eight));
    out.detail << "max |D|h^s on degenerate families " << worst_zero << ", crossed |D0| rel. error " << worst_crossed;
}

// 4 ---------------------------------------------------------------------------
void dual_formulas(Outcome& out) {
    std::mt19937_64 rng(404);
    double worst = 0.0;
    for (int it = 0; it < 1000; ++it) {
        const int N = 4 + 2 * static_cast<int>(rng() % 3);
        const MeshTopology topo(svtest::random_patch(N, rng));
        const VertexPatch p = enumerate_patch(topo, 0);
        const DCoefficients dc = compute_dcoefficients(p);
        const double h = p.diameter;
        // compared in units of h^-s so that near-zero values stay meaningful
        const double e0 = std::abs(dc.D[0] - dc.D0_closed) * h * h / std::max(1.0, std::abs(dc.D[0]) * h * h);
        const double e1 = std::abs(dc.D[1] - dc.D_closed[0]) * h / std::max(1.0, std::abs(dc.D[1]) * h);
        const double e2 = std::abs(dc.D[2] - dc.D_closed[1]) * h / std::max(1.0, std::abs(dc.D[2]) * h);
        worst = std::max({worst, e0, e1, e2});
        out.require(std::max({e0, e1, e2}) < 1e-10, "patch " + std::to_string(it));
    }
    out.detail << "1000 patches, max relative disagreement " << worst;
}

// 5 ---------------------------------------------------------------------------
void onto_ness(Outcome& out) {
    for (int n = 1; n <= 3; ++n) {
        const MeshTopology topo = preset("crossed", n);
        const auto t0 = std::chrono::steady_clock::now();
        const DivergenceAnalysis a = solve(topo);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.require(a.rank.K == 0, "crossed(" + std::to_string(n) + ") K = " + std::to_string(a.rank.K));
        out.require(a.infsup.beta > 0.0, "crossed beta not positive");
        out.require(a.rank.gap > 10.0, "crossed singular gap " + std::to_string(a.rank.gap));
        out.require(secs < 60.0 && a.n_velocity <= 3000, "crossed runtime or size");
        out.detail << "crossed(" << n << ") K=0 beta=" << a.infsup.beta << " gap=" << a.rank.gap << "; ";
    }
    for (int n = 2; n <= 3; ++n) {
        const DivergenceAnalysis a = solve(preset("type1", n));
        out.require(a.rank.K >= 1, "type1 K = " + std::to_string(a.rank.K));
        out.require(a.modes.cols() >= 1 && a.mode_alternation == 1.0,
                    "type1 mode alternation " + std::to_string(a.mode_alternation));
        out.detail << "type1(" << n << ") K=" << a.rank.K << " alternation=" << a.mode_alternation << "; ";
    }
}

// 6 ---------------------------------------------------------------------------
void dimension_identities(Outcome& out) {
    std::vector<std::pair<std::string, MeshTopology>> meshes;
    for (int n = 1; n <= 3; ++n) meshes.emplace_back("crossed", preset("crossed", n));
    for (int n = 2; n <= 3; ++n) meshes.emplace_back("type1", preset("type1", n));
    for (int n = 2; n <= 3; ++n) meshes.emplace_back("three_lines", preset("three_lines", n));
    for (int N = 3; N <= 8; ++N) {
        generators::NgonOptions o;
        o.N = N;
        meshes.emplace_back("ngon", MeshTopology(generators::ngon_patch(o)));
    }
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        meshes.emplace_back("perturbed", MeshTopology(generators::perturbed_grid(4, seed, 0.2)));
    }
    meshes.emplace_back("square", MeshTopology(load_mesh(kSquare)));

    int strang = 0;
    for (const auto& [name, topo] : meshes) {
        SolverOptions opt;
        opt.infsup = false;
        const DivergenceAnalysis a = solve(topo, opt);
        out.require(a.nullity.ok, name + " nullity " + std::to_string(a.nullity.nullity) + " vs " +
                                      std::to_string(a.nullity.predicted));
        if (a.spline.identity_applies) {
            ++strang;
            out.require(a.spline.identity_holds, name + " Strang identity");
        }
    }
    out.require(strang > 0, "the Strang identity never applied");

    const MeshTopology sq(load_mesh(kSquare));
    const MeshClassification mc = classify_mesh(sq, {});
    const SplineDims s = strang_dimensions(sq.counts(), mc.sigma_i, mc.sigma_b, 0);
    out.require(s.dim_s4 == 0 && s.raw < 0, "two-triangle clamp");
    out.detail << meshes.size() << " meshes, Strang identity checked on " << strang << ", clamp raw=" << s.raw
               << " -> " << s.dim_s4;
}

// 7 ---------------------------------------------------------------------------
void tree_machinery(Outcome& out) {
    int paths = 0, trips = 0, covered = 0;
    double dev = 0.0;
    std::vector<MeshTopology> meshes;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) meshes.emplace_back(generators::perturbed_grid(5, seed, 0.2));
    meshes.push_back(preset("crossed", 2));
    meshes.push_back(preset("three_lines", 2));
    {
        // type I mesh with one interior vertex moved: a single deep tree
        Triangulation m = generators::type1_diagonal(4);
        const int v = 2 * 5 + 2;
        m.vertices[v] += Vec2(0.07 / 4, 0.03 / 4);
        meshes.emplace_back(m);
    }
    for (const MeshTopology& topo : meshes) {
        SuiteOptions opt;
        opt.samples = 10;
        for (const SuiteResult& s : run_field_suites(topo, opt)) {
            if (s.name != "path" && s.name != "tree") continue;
            (s.name == "path" ? paths : trips) += s.cases;
            dev = std::max(dev, s.max_deviation);
            out.require(s.passed(), s.name + (s.messages.empty() ? "" : ": " + s.messages.front()));
        }
        const MeshClassification mc = classify_mesh(topo, {});
        if (build_tree_cover(topo, mc, {}).complete) {
            ++covered;
            SolverOptions so;
            so.infsup = false;
            const int K = analyze_divergence(topo, mc, so).rank.K;
            out.require(K == 0, "complete cover but K = " + std::to_string(K));
        }
    }
    out.require(paths > 0 && trips > 0 && covered > 0, "nothing exercised");
    out.detail << paths << " path checks, " << trips << " round trips, " << covered
               << " covered meshes with K=0, max deviation " << dev;
}

// 8 ---------------------------------------------------------------------------
struct Fingerprint {
    std::vector<VertexClass> classes;
    std::vector<double> weights;  // M_e^z per (edge, end)
    std::vector<double> rho, upsilon;
    int K = 0;
    double beta = 0.0, beta_semi = 0.0;
};

Fingerprint fingerprint(const Triangulation& m) {
    const MeshTopology topo(m);
    const MeshClassification mc = classify_mesh(topo, {});
    Fingerprint f;
    for (const VertexReport& r : mc.reports) f.classes.push_back(r.status);
    for (int e = 0; e < topo.num_edges(); ++e) {
        if (topo.edge(e).boundary()) continue;
        for (int z : topo.edge(e).v) f.weights.push_back(edge_weight(topo, e, z));
    }
    const TreeCover cover = build_tree_cover(topo, mc, {});
    for (const Tree& t : cover.trees) {
        const TreeStats s = tree_stats(topo, t, 1e-8);
        f.rho.push_back(s.rho);
        f.upsilon.push_back(s.upsilon);
    }
    const DivergenceAnalysis a = analyze_divergence(topo, mc, {});
    SolverOptions semi;
    semi.seminorm = true;
    f.K = a.rank.K;
    f.beta = a.infsup.beta;
    f.beta_semi = analyze_divergence(topo, mc, semi).infsup.beta;
    return f;
}

void invariance(Outcome& out) {
    std::vector<std::pair<std::string, Triangulation>> meshes{{"crossed", generators::crossed(2)},
                                                               {"type1", generators::type1_diagonal(2)},
                                                               {"perturbed", generators::perturbed_grid(3, 9, 0.2)}};
    double worst = 0.0;
    auto same = [&](double a, double b, const std::string& what) {
        const double d = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
        worst = std::max(worst, d);
        out.require(d <= 1e-8, what);
    };
    for (const auto& [name, m] : meshes) {
        const Fingerprint base = fingerprint(m);
        struct Motion {
            double scale, rotation;
            Vec2 shift;
            bool rigid;
        };
        for (const Motion& mo : {Motion{1.0, 0.9, Vec2(12.5, -3.0), true}, Motion{1.0, -2.2, Vec2(-1e3, 7e2), true},
                                 Motion{0.01, 0.0, Vec2::Zero(), false}, Motion{250.0, 0.4, Vec2(5, 5), false}}) {
            const std::string tag = name + (mo.rigid ? " rigid" : " scaled");
            const Fingerprint f = fingerprint(transformed(m, mo.scale, mo.rotation, mo.shift));
            out.require(f.classes == base.classes, tag + " classes");
            out.require(f.K == base.K, tag + " K");
            out.require(f.weights.size() == base.weights.size() && f.rho.size() == base.rho.size(), tag + " sizes");
            if (!out.ok) continue;
            for (std::size_t i = 0; i < f.weights.size(); ++i) {
                same(f.weights[i], base.weights[i], tag + " edge weight");
                out.require((std::abs(f.weights[i]) > 1e-8) == (std::abs(base.weights[i]) > 1e-8), tag + " acceptability");
            }
            for (std::size_t i = 0; i < f.rho.size(); ++i) {
                same(f.rho[i], base.rho[i], tag + " rho");
                same(f.upsilon[i], base.upsilon[i], tag + " upsilon");
            }
            same(f.beta_semi, base.beta_semi, tag + " seminorm beta");
            if (mo.rigid) same(f.beta, base.beta, tag + " beta");
        }
    }
    out.detail << "3 meshes x 4 motions, max relative change " << worst;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"field lemmas on random patches", field_lemmas},
        {"local interpolants", local_interpolants},
        {"D regression", d_regression},
        {"dual formula agreement", dual_formulas},
        {"onto-ness oracle", onto_ness},
        {"dimension identities", dimension_identities},
        {"tree machinery", tree_machinery},
        {"scale and rigid-motion invariance", invariance},
    };
    const std::vector<double> budget{10.0, 1e9, 1e9, 5.0, 180.0, 1e9, 1e9, 1e9};

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(out);
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.require(secs < budget[i], "runtime " + std::to_string(secs) + " s over budget");
        failed += out.ok ? 0 : 1;
        std::cout << (out.ok ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << criteria[i].first << " ("
                  << std::round(secs * 100) / 100 << " s): " << out.detail.str() << '\n';
        for (const std::string& p : out.problems) std::cout << "        " << p << '\n';
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
