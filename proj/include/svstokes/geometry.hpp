#pragma once

#include <array>

#include <Eigen/Core>

namespace svstokes {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Counter-clockwise rotation by 90 degrees.
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Geometry of one triangle. Everything indexed by local vertex slot k:
/// `length[k]`, `normal[k]` and `height[k]` refer to the edge opposite slot k.
struct TriangleGeom {
    std::array<Vec2, 3> point;
    double area = 0.0;
    std::array<double, 3> angle{};
    std::array<double, 3> cot{};
    std::array<double, 3> length{};
    std::array<Vec2, 3> normal;  // outward unit normal of the opposite edge
    std::array<double, 3> height{};

    double diameter() const;
    /// Cartesian -> barycentric coordinates.
    Vec3 barycentric(const Vec2& x) const;
    Vec2 cartesian(const Vec3& bary) const;
};

/// Builds the geometry of (p0, p1, p2). Points may be given in either
/// orientation; slots keep the caller's order. Throws GeometryError for
/// collinear or degenerate input.
TriangleGeom triangle_geometry(const Vec2& p0, const Vec2& p1, const Vec2& p2);

/// Gradient of the hat function of local slot k on the triangle.
inline Vec2 hat_gradient(const TriangleGeom& g, int slot) { return -g.normal[slot] / g.height[slot]; }

/// Interior angle at vertex a of the triangle (a, b, c).
double corner_angle(const Vec2& a, const Vec2& b, const Vec2& c);

/// Degeneracy threshold relative to diameter squared.
inline constexpr double kDegenerateAreaRatio = 1e-14;

}  // namespace svstokes
