#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "support.hpp"
#include "svstokes/edge_geometry.hpp"
#include "svstokes/errors.hpp"
#include "svstokes/fields.hpp"

using namespace svstokes;

namespace {

double cot(double a) { return std::cos(a) / std::sin(a); }

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

void check_local(const MeshTopology& topo, int z, const std::vector<double>& a) {
    const VertexPatch p = enumerate_patch(topo, z);
    const VertexReport r = classify_vertex(p, {});
    const PatchField v = local_interpolant(topo, p, r, {z, a});
    const FieldReport rep = verify_field(topo, v, patch_expectation(p, a));
    INFO(rep.summary());
    CHECK(rep.passed());
}

}  // namespace

TEST_CASE("eta and kappa") {
    const MeshTopology topo(generators::crossed(1, 2.0));
    const int e = topo.find_edge(0, 4);
    const double len = (topo.point(4) - topo.point(0)).norm();
    // integral of psi_z^2 psi_y along e is |e| / 12
    CHECK(edge_integral(topo, eta(topo, e, 0), e) == doctest::Approx(len / 12));
    // kappa has zero mean on e; its gradient at z is half that of psi_y
    CHECK(std::abs(edge_integral(topo, kappa(topo, e, 0), e)) < 1e-14);
    for (int t : topo.edge(e).tris) {
        const Vec2 g = scalar_gradient(topo, kappa(topo, e, 0), t, 0);
        const TriangleGeom& tg = topo.geom(t);
        const int k = topo.slot(t, 4);
        CHECK((g + 0.5 * tg.normal[k] / tg.height[k]).norm() < 1e-12);
    }
    CHECK_THROWS_AS(kappa(topo, topo.find_edge(0, 1), 0), GeometryError);
    CHECK_THROWS_AS(basis_w(topo, topo.find_edge(0, 1), 0), GeometryError);
}

TEST_CASE("w has unit divergence at z on both sides of the edge") {
    const MeshTopology topo(generators::perturbed_grid(4, 11, 0.2));
    for (int e = 0; e < topo.num_edges(); ++e) {
        if (topo.edge(e).boundary()) continue;
        for (int z : topo.edge(e).v) {
            const PatchField w = basis_w(topo, e, z);
            FieldExpectation ex;
            for (int t : topo.edge(e).tris) ex.vertex_values[{t, z}] = 1.0;
            ex.support = std::set<int>(topo.edge(e).tris.begin(), topo.edge(e).tris.end());
            const FieldReport rep = verify_field(topo, w, ex);
            INFO(rep.summary());
            CHECK(rep.passed());
        }
    }
}

TEST_CASE("chi and xi divergences match the d coefficients") {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 100; ++it) {
        const int N = 4 + 2 * static_cast<int>(rng() % 3);
        const MeshTopology topo(svtest::random_patch(N, rng));
        const VertexPatch p = enumerate_patch(topo, 0);
        const DCoefficients dc = compute_dcoefficients(p);
        const std::vector<double> chi = patch_divergence(topo, basis_chi_sum(topo, p), p);
        const double h = p.diameter;
        for (int j = 0; j < N; ++j) CHECK(std::abs(chi[j] - 12.0 * dc.d0[j]) * h * h < 1e-9);
        for (int i = 1; i <= 2; ++i) {
            const PatchField xi = basis_xi(topo, p, i, dc);
            const std::vector<double> dv = patch_divergence(topo, xi, p);
            for (int j = 0; j < N; ++j) CHECK(std::abs(dv[j] - dc.d[j][i - 1]) * h < 1e-9);
            // divergence vanishes at the rim and has zero mean
            FieldExpectation ex;
            ex.free_vertices = {0};
            const FieldReport rep = verify_field(topo, xi, ex);
            INFO(rep.summary());
            CHECK(rep.passed());
        }
    }
}

TEST_CASE("local interpolants on random odd and even patches") {
    std::mt19937_64 rng(21);
    int even = 0;
    for (int it = 0; it < 200; ++it) {
        const int N = 3 + static_cast<int>(rng() % 6);
        const MeshTopology topo(svtest::random_patch(N, rng));
        const VertexReport r = classify_vertex(enumerate_patch(topo, 0), {});
        if (r.status == VertexClass::EvenLI) ++even;
        REQUIRE((r.status == VertexClass::OddLI || r.status == VertexClass::EvenLI));
        check_local(topo, 0, random_values(N, rng));
    }
    CHECK(even > 50);
}

TEST_CASE("local interpolants on the crossed mesh") {
    std::mt19937_64 rng(3);
    const MeshTopology topo(generators::crossed(3, 0.8));
    for (int z = 0; z < topo.num_vertices(); ++z) {
        const VertexPatch p = enumerate_patch(topo, z);
        if (!p.interior) continue;
        std::vector<double> a = random_values(p.N(), rng);
        if (p.N() == 4) {
            // project onto W(z)
            const double A = alternating_sum(a);
            a[0] -= A;
            CHECK(std::abs(alternating_sum(a)) < 1e-15);
            std::vector<double> bad = a;
            bad[1] += 0.5;
            CHECK_THROWS_AS(local_interpolant(topo, p, classify_vertex(p, {}), {z, bad}), InputError);
        }
        check_local(topo, z, a);
    }
}

TEST_CASE("non-interpolating vertices are refused") {
    const MeshTopology hex(generators::ngon_patch({}));
    const VertexPatch p = enumerate_patch(hex, 0);
    CHECK_THROWS_AS(local_interpolant(hex, p, classify_vertex(p, {}), {0, std::vector<double>(6, 1.0)}),
                    ConstructionError);
    const MeshTopology topo(generators::crossed(1));
    const VertexPatch c = enumerate_patch(topo, 4);
    CHECK_THROWS_AS(local_interpolant(topo, c, classify_vertex(c, {}), {4, {1, 2}}), InputError);
}

TEST_CASE("boundary interpolant") {
    std::mt19937_64 rng(17);
    const MeshTopology topo(generators::perturbed_grid(5, 2, 0.2));
    int tested = 0;
    for (int z = 0; z < topo.num_vertices(); ++z) {
        const VertexPatch p = enumerate_patch(topo, z);
        if (p.interior || p.N() < 2 || is_singular(p, 1e-10)) continue;
        const std::vector<double> pv = random_values(p.N(), rng);
        const BoundaryInterpolant b = boundary_interpolant(topo, p, pv);
        CHECK(!topo.on_boundary(b.polluted));
        FieldExpectation ex = patch_expectation(p, pv);
        ex.free_vertices = {b.polluted};
        const FieldReport rep = verify_field(topo, b.field, ex);
        INFO(rep.summary());
        CHECK(rep.passed());
        for (const auto& [t, s] : b.spill) CHECK(s == doctest::Approx(vertex_divergence(topo, b.field, t, b.polluted)));
        ++tested;
    }
    CHECK(tested > 10);

    // a fan without interior rim vertices has no admissible pivot
    const MeshTopology fan(svtest::boundary_fan(3, rng));
    CHECK_THROWS_AS(boundary_interpolant(fan, enumerate_patch(fan, 0), {1, 2, 3}), ConstructionError);
    const MeshTopology one(make_triangulation({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}));
    CHECK_THROWS_AS(boundary_interpolant(one, enumerate_patch(one, 0), {1}), ConstructionError);
}

TEST_CASE("edge transfer spills only across the edge") {
    std::mt19937_64 rng(5);
    const MeshTopology topo(generators::perturbed_grid(5, 7, 0.2));
    int tested = 0;
    for (int e = 0; e < topo.num_edges(); ++e) {
        const Edge& ed = topo.edge(e);
        if (ed.boundary()) continue;
        for (int z : ed.v) {
            const VertexPatch p = enumerate_patch(topo, z);
            const std::vector<double> a = random_values(p.N(), rng);
            if (std::abs(edge_weight(topo, e, z)) < 1e-8) {
                CHECK_THROWS_AS(edge_transfer(topo, z, e, a), ConstructionError);
                continue;
            }
            const EdgeTransfer tr = edge_transfer(topo, z, e, a);
            const double s1 = -tr.s * cot(tr.theta1) / tr.M;
            const double s2 = tr.s * cot(tr.theta2) / tr.M;
            CHECK(svtest::close(tr.spill1, s1, 1e-9));
            CHECK(svtest::close(tr.spill2, s2, 1e-9));
            FieldExpectation ex = patch_expectation(p, a);
            ex.support.reset();
            ex.vertex_values[{tr.k1, tr.y}] = s1;
            ex.vertex_values[{tr.k2, tr.y}] = s2;
            const FieldReport rep = verify_field(topo, tr.field, ex);
            INFO(rep.summary());
            CHECK(rep.passed());
            ++tested;
        }
    }
    CHECK(tested > 100);
}

TEST_CASE("path interpolant matches the predicted spill") {
    std::mt19937_64 rng(9);
    const MeshTopology topo(generators::perturbed_grid(6, 13, 0.2));
    // walk a row of interior vertices
    const int n = 6;
    std::vector<int> path;
    for (int i = 1; i < n; ++i) path.push_back(2 * (n + 1) + i);
    for (std::size_t len = 2; len <= path.size(); ++len) {
        const std::vector<int> sub(path.begin(), path.begin() + len);
        const VertexPatch p = enumerate_patch(topo, sub.front());
        const std::vector<double> a = random_values(p.N(), rng);
        const PathInterpolant pi = path_interpolant(topo, sub, a);
        CHECK(svtest::close(std::abs(pi.spill1), pi.predicted1, 1e-8));
        CHECK(svtest::close(std::abs(pi.spill2), pi.predicted2, 1e-8));
        FieldExpectation ex = patch_expectation(p, a);
        ex.support.reset();
        ex.free_vertices = {sub.back()};
        const FieldReport rep = verify_field(topo, pi.field, ex);
        INFO(rep.summary());
        CHECK(rep.passed());
    }
    CHECK_THROWS_AS(path_interpolant(topo, {path[0], path[0]}, std::vector<double>(6, 0.0)), InputError);
}

TEST_CASE("json export") {
    const MeshTopology topo(generators::crossed(1));
    const std::string s = field_to_json(basis_w(topo, topo.find_edge(0, 4), 0));
    CHECK(s.find("\"x\"") != std::string::npos);
}
