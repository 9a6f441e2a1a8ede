#include "svstokes/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "svstokes/errors.hpp"

namespace svstokes {

double corner_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 u = b - a;
    const Vec2 v = c - a;
    return std::atan2(std::abs(cross2(u, v)), u.dot(v));
}

double TriangleGeom::diameter() const { return std::max({length[0], length[1], length[2]}); }

Vec3 TriangleGeom::barycentric(const Vec2& x) const {
    Vec3 l;
    for (int k = 0; k < 3; ++k) {
        const Vec2& a = point[(k + 1) % 3];
        // signed distance to the opposite edge, measured inward
        l[k] = (x - a).dot(-normal[k]) / height[k];
    }
    return l;
}

Vec2 TriangleGeom::cartesian(const Vec3& bary) const {
    return bary[0] * point[0] + bary[1] * point[1] + bary[2] * point[2];
}

TriangleGeom triangle_geometry(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    TriangleGeom g;
    g.point = {p0, p1, p2};
    for (int k = 0; k < 3; ++k) g.length[k] = (g.point[(k + 2) % 3] - g.point[(k + 1) % 3]).norm();
    const double diam = g.diameter();
    const double signed_area = 0.5 * cross2(p1 - p0, p2 - p0);
    g.area = std::abs(signed_area);
    if (!(diam > 0.0) || g.area <= kDegenerateAreaRatio * diam * diam) {
        throw GeometryError("degenerate triangle");
    }
    const double orient = signed_area > 0 ? 1.0 : -1.0;
    for (int k = 0; k < 3; ++k) {
        const Vec2& a = g.point[k];
        const Vec2& b = g.point[(k + 1) % 3];
        const Vec2& c = g.point[(k + 2) % 3];
        g.angle[k] = corner_angle(a, b, c);
        g.cot[k] = (b - a).dot(c - a) / std::abs(cross2(b - a, c - a));
        // edge b -> c is traversed counter-clockwise when orient > 0;
        // the outward normal is then the clockwise rotation of its direction
        const Vec2 dir = (c - b) / g.length[k];
        g.normal[k] = -orient * perp(dir);
        g.height[k] = 2.0 * g.area / g.length[k];
    }
    return g;
}

}  // namespace svstokes
