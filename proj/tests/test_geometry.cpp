#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <random>

#include "support.hpp"
#include "svstokes/edge_geometry.hpp"
#include "svstokes/errors.hpp"
#include "svstokes/geometry.hpp"

using namespace svstokes;
using std::numbers::pi;

TEST_CASE("right isoceles triangle") {
    const TriangleGeom g = triangle_geometry({0, 0}, {1, 0}, {0, 1});
    CHECK(g.area == doctest::Approx(0.5));
    CHECK(g.angle[0] == doctest::Approx(pi / 2));
    CHECK(g.angle[1] == doctest::Approx(pi / 4));
    CHECK(g.angle[2] == doctest::Approx(pi / 4));
    const Vec2 g1 = hat_gradient(g, 1);
    CHECK(g1.x() == doctest::Approx(1.0));
    CHECK(g1.y() == doctest::Approx(0.0).epsilon(1e-14));
    const Vec2 g0 = hat_gradient(g, 0);
    CHECK(g0.x() == doctest::Approx(-1.0));
    CHECK(g0.y() == doctest::Approx(-1.0));
}

TEST_CASE("equilateral triangle") {
    const TriangleGeom g = triangle_geometry({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
    CHECK(g.area == doctest::Approx(std::sqrt(3.0) / 4));
    for (double c : g.cot) CHECK(c == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("collinear input is rejected") {
    CHECK_THROWS_AS(triangle_geometry({0, 0}, {1, 1}, {2, 2}), GeometryError);
    CHECK_THROWS_AS(triangle_geometry({0, 0}, {0, 0}, {1, 0}), GeometryError);
}

TEST_CASE("random triangles satisfy the hat-function identities") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int tested = 0;
    for (int it = 0; it < 10000; ++it) {
        const Vec2 p0(u(rng), u(rng)), p1(u(rng), u(rng)), p2(u(rng), u(rng));
        const double d = std::max({(p0 - p1).norm(), (p1 - p2).norm(), (p0 - p2).norm()});
        if (std::abs(cross2(p1 - p0, p2 - p0)) < 1e-3 * d * d) continue;
        const TriangleGeom g = triangle_geometry(p0, p1, p2);
        ++tested;
        CHECK(std::abs(g.angle[0] + g.angle[1] + g.angle[2] - pi) < 1e-10);
        for (int k = 0; k < 3; ++k) {
            CHECK(svtest::close(g.area, 0.5 * g.height[k] * g.length[k], 1e-10));
            // h_T^y = |e| sin(theta) for both edges through vertex k
            for (int o : {(k + 1) % 3, (k + 2) % 3}) {
                const double e = (g.point[k] - g.point[o]).norm();
                CHECK(svtest::close(g.height[k], e * std::sin(g.angle[o]), 1e-10));
                // t_e^z . grad psi_k = 1/|e| with t pointing from o to k
                const Vec2 t = (g.point[k] - g.point[o]) / e;
                CHECK(svtest::close(t.dot(hat_gradient(g, k)) * e, 1.0, 1e-10));
            }
        }
    }
    CHECK(tested > 9000);
}

TEST_CASE("hat gradient matches finite differences of barycentric evaluation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 200; ++it) {
        const Vec2 p0(u(rng), u(rng)), p1(u(rng) + 2, u(rng)), p2(u(rng), u(rng) + 2);
        const TriangleGeom g = triangle_geometry(p0, p1, p2);
        const Vec2 x = g.cartesian(Vec3(0.3, 0.3, 0.4));
        const double h = 1e-6;
        for (int k = 0; k < 3; ++k) {
            const double fx = (g.barycentric(x + Vec2(h, 0))[k] - g.barycentric(x - Vec2(h, 0))[k]) / (2 * h);
            const double fy = (g.barycentric(x + Vec2(0, h))[k] - g.barycentric(x - Vec2(0, h))[k]) / (2 * h);
            const Vec2 grad = hat_gradient(g, k);
            CHECK(std::abs(fx - grad.x()) < 1e-6 * std::max(1.0, grad.norm()));
            CHECK(std::abs(fy - grad.y()) < 1e-6 * std::max(1.0, grad.norm()));
        }
    }
}

TEST_CASE("edge pair geometry") {
    const MeshTopology crossed(generators::crossed(1, 1.0));
    // corner 0 to center 4 is interior
    const int e = crossed.find_edge(0, 4);
    const EdgePair at_corner = edge_pair_geometry(crossed, e, 0);
    CHECK(at_corner.phi1 == doctest::Approx(pi / 4));
    CHECK(at_corner.phi2 == doctest::Approx(pi / 4));
    const EdgePair at_center = edge_pair_geometry(crossed, e, 4);
    CHECK(at_center.phi1 == doctest::Approx(pi / 2));
    CHECK(at_center.phi2 == doctest::Approx(pi / 2));
    CHECK_THROWS_AS(edge_pair_geometry(crossed, crossed.find_edge(0, 1), 0), GeometryError);

    const MeshTopology type1(generators::type1_diagonal(3, 1.0));
    for (int k = 0; k < type1.num_edges(); ++k) {
        const Edge& ed = type1.edge(k);
        if (ed.boundary()) continue;
        const EdgePair ep = edge_pair_geometry(type1, k, ed.v[0]);
        for (double a : {ep.phi1, ep.phi2, ep.theta1, ep.theta2}) {
            CHECK((std::abs(a - pi / 4) < 1e-12 || std::abs(a - pi / 2) < 1e-12));
        }
    }

    const MeshTopology pert(generators::perturbed_grid(4, 5, 0.2));
    for (int k = 0; k < pert.num_edges(); ++k) {
        const Edge& ed = pert.edge(k);
        if (ed.boundary()) continue;
        const EdgePair ep = edge_pair_geometry(pert, k, ed.v[1]);
        const TriangleGeom& g1 = pert.geom(ep.first);
        const int third = 3 - pert.slot(ep.first, ep.z) - pert.slot(ep.first, ep.y);
        CHECK(ep.phi1 + ep.theta1 + g1.angle[third] == doctest::Approx(pi));
    }
}
