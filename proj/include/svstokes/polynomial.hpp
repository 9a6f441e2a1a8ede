#pragma once

#include <array>
#include <span>

#include "svstokes/geometry.hpp"

namespace svstokes::poly {

// Homogeneous barycentric monomials lambda0^a lambda1^b lambda2^c.
// Any polynomial of degree <= d on a triangle has a unique homogeneous
// degree-d representation because lambda0 + lambda1 + lambda2 = 1.
using Exponent = std::array<int, 3>;

inline constexpr std::array<Exponent, 10> kCubicExponents{{
    {3, 0, 0}, {0, 3, 0}, {0, 0, 3},
    {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {0, 2, 1}, {1, 0, 2}, {0, 1, 2},
    {1, 1, 1},
}};
inline constexpr std::array<Exponent, 6> kQuadExponents{{
    {2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1},
}};

using Cubic = std::array<double, 10>;
using Quadratic = std::array<double, 6>;

int cubic_index(const Exponent& e);
int quad_index(const Exponent& e);

double eval(const Cubic& p, const Vec3& bary);
double eval(const Quadratic& q, const Vec3& bary);

/// d p / d lambda_k as a homogeneous quadratic.
Quadratic partial(const Cubic& p, int k);
/// Cartesian gradient of p at a barycentric point of triangle g.
Vec2 gradient(const Cubic& p, const TriangleGeom& g, const Vec3& bary);

// Builders for the products of hat functions used by the local fields.
// Slots refer to local vertex positions of the triangle.
Cubic monomial(const Exponent& e, double coeff = 1.0);
/// lambda_a^2 lambda_b
Cubic sq_times(int a, int b);
/// lambda_a^2, homogenised to degree 3
Cubic square(int a);
/// lambda_a lambda_b, homogenised to degree 3
Cubic product(int a, int b);
/// lambda_a, homogenised to degree 3
Cubic linear(int a);

Cubic& axpy(Cubic& y, double a, const Cubic& x);
Quadratic& axpy(Quadratic& y, double a, const Quadratic& x);

/// Exact integral of a homogeneous monomial over a triangle of unit area.
double monomial_integral_unit(const Exponent& e);
double integral(const Quadratic& q, double area);
double integral(const Cubic& p, double area);

/// Value of a quadratic at local vertex slot k.
inline double vertex_value(const Quadratic& q, int k) { return q[k]; }

struct VectorCubic {
    Cubic x{};
    Cubic y{};

    VectorCubic& operator+=(const VectorCubic& o);
    VectorCubic& operator*=(double s);
    double max_abs() const;
};

/// Scalar cubic times a constant vector.
VectorCubic times(const Cubic& p, const Vec2& dir);
/// Divergence on triangle g (a quadratic).
Quadratic divergence(const VectorCubic& v, const TriangleGeom& g);
/// Frobenius norm of the Jacobian at a barycentric point.
double jacobian_norm(const VectorCubic& v, const TriangleGeom& g, const Vec3& bary);
Vec2 eval(const VectorCubic& v, const Vec3& bary);

// Lagrange node sets on the reference barycentric simplex.
/// 10 cubic nodes: vertices, two per edge, centroid. Edge k is opposite
/// slot k; node 3 + 2k sits nearer vertex (k+1)%3, node 4 + 2k nearer (k+2)%3.
const std::array<Vec3, 10>& cubic_nodes();
/// 6 quadratic nodes: vertices then edge midpoints (midpoint k opposite slot k).
const std::array<Vec3, 6>& quad_nodes();
/// Monomial coefficients of the cubic Lagrange basis function of node i.
const std::array<Cubic, 10>& cubic_lagrange_basis();
/// Monomial coefficients of the quadratic Lagrange basis function of node i.
const std::array<Quadratic, 6>& quad_lagrange_basis();
/// Quadratic with the given nodal values (vertices, then midpoints).
Quadratic from_nodal(std::span<const double, 6> values);

}  // namespace svstokes::poly
