#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "svstokes/polynomial.hpp"
#include "svstokes/quadrature.hpp"

using namespace svstokes;
using namespace svstokes::poly;

TEST_CASE("homogenised builders evaluate like the products they stand for") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 50; ++it) {
        Vec3 l(u(rng), u(rng), u(rng));
        l /= l.sum();
        for (int a = 0; a < 3; ++a) {
            CHECK(eval(linear(a), l) == doctest::Approx(l[a]));
            CHECK(eval(square(a), l) == doctest::Approx(l[a] * l[a]));
            for (int b = 0; b < 3; ++b) {
                CHECK(eval(product(a, b), l) == doctest::Approx(l[a] * l[b]));
                CHECK(eval(sq_times(a, b), l) == doctest::Approx(l[a] * l[a] * l[b]));
            }
        }
    }
}

TEST_CASE("exact monomial integrals agree with the degree-6 rule") {
    const TriangleGeom g = triangle_geometry({0.1, -0.3}, {2.0, 0.4}, {0.7, 1.9});
    for (int a = 0; a <= 6; ++a) {
        for (int b = 0; a + b <= 6; ++b) {
            for (int c = 0; a + b + c <= 6; ++c) {
                const double exact = monomial_integral_unit({a, b, c}) * g.area;
                const double q = quadrature::integrate(g, [&](const Vec3& l) {
                    return std::pow(l[0], a) * std::pow(l[1], b) * std::pow(l[2], c);
                });
                CHECK(q == doctest::Approx(exact).epsilon(1e-12));
            }
        }
    }
    double sum = 0.0;
    for (const auto& p : quadrature::edge_gauss5()) sum += p.weight * std::pow(p.s, 9);
    CHECK(sum == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("gradient and divergence match finite differences") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const TriangleGeom g = triangle_geometry({0, 0}, {1.3, 0.2}, {0.4, 1.1});
    for (int it = 0; it < 20; ++it) {
        VectorCubic v;
        for (double& c : v.x) c = u(rng);
        for (double& c : v.y) c = u(rng);
        const Vec2 x = g.cartesian(Vec3(0.2, 0.5, 0.3));
        const double h = 1e-6;
        auto ev = [&](const Vec2& p) { return eval(v, g.barycentric(p)); };
        const double dudx = (ev(x + Vec2(h, 0)).x() - ev(x - Vec2(h, 0)).x()) / (2 * h);
        const double dvdy = (ev(x + Vec2(0, h)).y() - ev(x - Vec2(0, h)).y()) / (2 * h);
        const Quadratic d = divergence(v, g);
        CHECK(eval(d, g.barycentric(x)) == doctest::Approx(dudx + dvdy).epsilon(1e-6));
        const Vec2 gx = gradient(v.x, g, g.barycentric(x));
        CHECK(gx.x() == doctest::Approx(dudx).epsilon(1e-6));
    }
}

TEST_CASE("Lagrange bases are nodal") {
    const auto& cb = cubic_lagrange_basis();
    const auto& cn = cubic_nodes();
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) CHECK(eval(cb[i], cn[j]) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
    const auto& qb = quad_lagrange_basis();
    const auto& qn = quad_nodes();
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) CHECK(eval(qb[i], qn[j]) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
    const std::array<double, 6> vals{1, 2, 3, 4, 5, 6};
    const Quadratic q = from_nodal(vals);
    for (int j = 0; j < 6; ++j) CHECK(eval(q, qn[j]) == doctest::Approx(vals[j]));
    CHECK(vertex_value(q, 1) == doctest::Approx(2.0));
}
