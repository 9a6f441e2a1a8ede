#include "svstokes/classify.hpp"

#include <cmath>
#include <limits>

#include "svstokes/edge_geometry.hpp"
#include "svstokes/errors.hpp"

namespace svstokes {

namespace {

// E_1^perp = (0, 1), E_2^perp = (-1, 0)
const std::array<Vec2, 2> kEperp{Vec2(0.0, 1.0), Vec2(-1.0, 0.0)};

double sign_pow(int j) { return (j % 2 == 0) ? 1.0 : -1.0; }

double cot(double a) { return std::cos(a) / std::sin(a); }

}  // namespace

double theta(const VertexPatch& p) {
    const int n = p.N();
    const int pairs = p.interior ? n : n - 1;
    double best = 0.0;
    for (int j = 1; j <= pairs; ++j) best = std::max(best, std::abs(std::sin(p.theta(j) + p.theta(j + 1))));
    return best;
}

bool is_singular(const VertexPatch& p, double tol) { return theta(p) <= tol; }

double alternating_sum(std::span<const double> values) {
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) s += sign_pow(static_cast<int>(j)) * values[j];
    return s;
}

double alternating_functional(const VertexPatch& p, std::span<const double> values) {
    if (static_cast<int>(values.size()) != p.N()) {
        throw InputError("alternating functional: expected " + std::to_string(p.N()) + " values, got " +
                         std::to_string(values.size()));
    }
    return alternating_sum(values);
}

DCoefficients compute_dcoefficients(const VertexPatch& p) {
    if (!p.interior) throw GeometryError("D coefficients need an interior vertex");
    const int n = p.N();
    DCoefficients dc;
    dc.N = n;
    dc.b.resize(n);
    dc.c.resize(n);
    dc.d0.resize(n);
    dc.d.resize(n);

    auto y = [&](int j) { return Vec2(p.len(j) * p.t(j)); };  // y_j - z
    auto inv2 = [&](int j) { return 1.0 / (p.len(j) * p.len(j)); };

    std::array<double, 2> run{0.0, 0.0};
    for (int j = 1; j <= n; ++j) {
        const Vec2 f = y(j) - y(j - 1);
        for (int i = 0; i < 2; ++i) {
            dc.b[j - 1][i] = -f.dot(kEperp[i]) / 3.0;
            run[i] += dc.b[j - 1][i];
            dc.c[j - 1][i] = run[i];
        }
    }
    // c_0 = c_N = 0 in the correction formula
    auto cval = [&](int j, int i) { return (j <= 0 || j >= n) ? 0.0 : dc.c[j - 1][i]; };

    dc.D = {0.0, 0.0, 0.0};
    for (int j = 1; j <= n; ++j) {
        const double ct = cot(p.theta(j));
        dc.d0[j - 1] = ct * (inv2(j) - inv2(j - 1));
        for (int i = 0; i < 2; ++i) {
            dc.d[j - 1][i] = 3.0 * dc.b[j - 1][i] / p.area(j) -
                             12.0 * ct * (cval(j, i) * inv2(j) - cval(j - 1, i) * inv2(j - 1));
        }
        const double s = sign_pow(j);
        dc.D[0] += s * dc.d0[j - 1];
        dc.D[1] += s * dc.d[j - 1][0];
        dc.D[2] += s * dc.d[j - 1][1];
    }

    // Closed forms; they rely on the cyclic index shift and so assume N even.
    dc.D0_closed = 0.0;
    for (int j = 1; j <= n; ++j) dc.D0_closed += sign_pow(j) * (cot(p.theta(j)) + cot(p.theta(j + 1))) * inv2(j);
    for (int i = 0; i < 2; ++i) {
        double s = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double coef = 4.0 * (cot(p.theta(j)) + cot(p.theta(j + 1))) * inv2(j) -
                                (1.0 / p.area(j) + 1.0 / p.area(j + 1));
            s += sign_pow(j) * coef * y(j).dot(kEperp[i]);
        }
        dc.D_closed[i] = s - 4.0 * dc.D0_closed * y(n).dot(kEperp[i]);
    }

    const double h = p.diameter;
    dc.scaled = {std::abs(dc.D[0]) * h * h, std::abs(dc.D[1]) * h, std::abs(dc.D[2]) * h};
    return dc;
}

double edge_weight(const MeshTopology& topo, int edge, int z) {
    const EdgePair ep = edge_pair_geometry(topo, edge, z);
    return cot(ep.phi1) + cot(ep.phi2);
}

std::string to_string(VertexClass c) {
    switch (c) {
        case VertexClass::SingularLI: return "SingularLI";
        case VertexClass::OddLI: return "OddLI";
        case VertexClass::EvenLI: return "EvenLI";
        case VertexClass::NotLI: return "NotLI";
        case VertexClass::BoundaryNonSingular: return "BoundaryNonSingular";
    }
    return "unknown";
}

VertexReport classify_vertex(const VertexPatch& p, const Tolerances& tol) {
    VertexReport r;
    r.vertex = p.center;
    r.interior = p.interior;
    r.N = p.N();
    r.theta = theta(p);
    r.singular = r.theta <= tol.singular;
    if (r.singular) {
        r.status = VertexClass::SingularLI;
        return r;
    }
    if (!p.interior) {
        r.status = VertexClass::BoundaryNonSingular;
        return r;
    }
    if (r.N % 2 == 1) {
        r.status = VertexClass::OddLI;
        return r;
    }
    const DCoefficients dc = compute_dcoefficients(p);
    r.has_d = true;
    r.D = dc.D;
    r.scaled = dc.scaled;
    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if (dc.scaled[i] > dc.scaled[best]) best = i;
    }
    if (dc.scaled[best] > tol.interp) {
        r.status = VertexClass::EvenLI;
        r.chosen = best;
        r.conditioning = 1.0 + 1.0 / dc.scaled[best];
    } else {
        r.status = VertexClass::NotLI;
        r.conditioning = std::numeric_limits<double>::infinity();
    }
    return r;
}

MeshClassification classify_mesh(const MeshTopology& topo, const Tolerances& tol) {
    MeshClassification mc;
    mc.reports.reserve(topo.num_vertices());
    for (int v = 0; v < topo.num_vertices(); ++v) {
        const VertexReport r = classify_vertex(enumerate_patch(topo, v), tol);
        switch (r.status) {
            case VertexClass::SingularLI: ++mc.singular_li; break;
            case VertexClass::OddLI: ++mc.odd_li; break;
            case VertexClass::EvenLI: ++mc.even_li; break;
            case VertexClass::NotLI: ++mc.not_li; break;
            case VertexClass::BoundaryNonSingular: ++mc.boundary_nonsingular; break;
        }
        if (r.singular) {
            ++mc.sigma;
            if (r.interior) ++mc.sigma_i; else ++mc.sigma_b;
        }
        mc.reports.push_back(r);
    }
    return mc;
}

}  // namespace svstokes
