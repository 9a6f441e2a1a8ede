#include "svstokes/quadrature.hpp"

#include <cmath>
#include <vector>

namespace svstokes::quadrature {

namespace {

std::vector<Point> build_degree6() {
    // Dunavant (1985), degree 6, 12 points.
    struct Orbit {
        double a, b, c, w;
    };
    const Orbit orbits[] = {
        {0.501426509658179, 0.249286745170910, 0.249286745170910, 0.116786275726379},
        {0.873821971016996, 0.063089014491502, 0.063089014491502, 0.050844906370207},
        {0.053145049844817, 0.310352451033784, 0.636502499121399, 0.082851075618374},
    };
    std::vector<Point> pts;
    for (const Orbit& o : orbits) {
        const double v[3] = {o.a, o.b, o.c};
        if (o.b == o.c) {
            for (int k = 0; k < 3; ++k) {
                Vec3 l;
                l[k] = v[0];
                l[(k + 1) % 3] = v[1];
                l[(k + 2) % 3] = v[2];
                pts.push_back({l, o.w});
            }
        } else {
            const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
            for (const auto& p : perms) pts.push_back({Vec3(v[p[0]], v[p[1]], v[p[2]]), o.w});
        }
    }
    // The tabulated values carry 15 digits; renormalise so constants integrate exactly.
    double total = 0.0;
    for (const Point& p : pts) total += p.weight;
    for (Point& p : pts) {
        p.weight /= total;
        p.bary /= p.bary.sum();
    }
    return pts;
}

std::vector<EdgePoint> build_gauss5() {
    const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640, 0.9061798459386640};
    const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                         0.2369268850561891};
    std::vector<EdgePoint> pts;
    for (int i = 0; i < 5; ++i) pts.push_back({0.5 * (x[i] + 1.0), 0.5 * w[i]});
    return pts;
}

}  // namespace

std::span<const Point> triangle_degree6() {
    static const std::vector<Point> pts = build_degree6();
    return pts;
}

std::span<const EdgePoint> edge_gauss5() {
    static const std::vector<EdgePoint> pts = build_gauss5();
    return pts;
}

}  // namespace svstokes::quadrature
