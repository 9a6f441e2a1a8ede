#pragma once

#include <array>
#include <span>

#include "svstokes/geometry.hpp"

namespace svstokes::quadrature {

struct Point {
    Vec3 bary;
    double weight;  // sums to 1; multiply by the triangle area
};

/// Symmetric 12-point rule, exact for polynomials of degree <= 6.
std::span<const Point> triangle_degree6();

struct EdgePoint {
    double s;       // parameter in [0, 1]
    double weight;  // sums to 1; multiply by the edge length
};

/// 5-point Gauss-Legendre on [0, 1], exact through degree 9.
std::span<const EdgePoint> edge_gauss5();

template <class F>
double integrate(const TriangleGeom& g, F&& f) {
    double s = 0.0;
    for (const Point& q : triangle_degree6()) s += q.weight * f(q.bary);
    return s * g.area;
}

}  // namespace svstokes::quadrature
