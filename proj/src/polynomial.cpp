#include "svstokes/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace svstokes::poly {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double pow_int(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace

int cubic_index(const Exponent& e) {
    for (int i = 0; i < 10; ++i) {
        if (kCubicExponents[i] == e) return i;
    }
    return -1;
}

int quad_index(const Exponent& e) {
    for (int i = 0; i < 6; ++i) {
        if (kQuadExponents[i] == e) return i;
    }
    return -1;
}

double eval(const Cubic& p, const Vec3& l) {
    double s = 0.0;
    for (int i = 0; i < 10; ++i) {
        const auto& e = kCubicExponents[i];
        s += p[i] * pow_int(l[0], e[0]) * pow_int(l[1], e[1]) * pow_int(l[2], e[2]);
    }
    return s;
}

double eval(const Quadratic& q, const Vec3& l) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) {
        const auto& e = kQuadExponents[i];
        s += q[i] * pow_int(l[0], e[0]) * pow_int(l[1], e[1]) * pow_int(l[2], e[2]);
    }
    return s;
}

Quadratic partial(const Cubic& p, int k) {
    Quadratic q{};
    for (int i = 0; i < 10; ++i) {
        Exponent e = kCubicExponents[i];
        if (e[k] == 0 || p[i] == 0.0) continue;
        const double c = e[k] * p[i];
        --e[k];
        q[quad_index(e)] += c;
    }
    return q;
}

Vec2 gradient(const Cubic& p, const TriangleGeom& g, const Vec3& bary) {
    Vec2 out = Vec2::Zero();
    for (int k = 0; k < 3; ++k) out += eval(partial(p, k), bary) * hat_gradient(g, k);
    return out;
}

Cubic monomial(const Exponent& e, double coeff) {
    Cubic c{};
    c[cubic_index(e)] = coeff;
    return c;
}

Cubic sq_times(int a, int b) {
    Exponent e{0, 0, 0};
    e[a] += 2;
    e[b] += 1;
    return monomial(e);
}

Cubic square(int a) {
    Cubic c{};
    for (int k = 0; k < 3; ++k) {
        Exponent e{0, 0, 0};
        e[a] += 2;
        e[k] += 1;
        c[cubic_index(e)] += 1.0;
    }
    return c;
}

Cubic product(int a, int b) {
    Cubic c{};
    for (int k = 0; k < 3; ++k) {
        Exponent e{0, 0, 0};
        e[a] += 1;
        e[b] += 1;
        e[k] += 1;
        c[cubic_index(e)] += 1.0;
    }
    return c;
}

Cubic linear(int a) {
    // lambda_a (lambda_0 + lambda_1 + lambda_2)^2
    Cubic c{};
    for (int k = 0; k < 3; ++k) {
        for (int m = 0; m < 3; ++m) {
            Exponent e{0, 0, 0};
            e[a] += 1;
            e[k] += 1;
            e[m] += 1;
            c[cubic_index(e)] += 1.0;
        }
    }
    return c;
}

Cubic& axpy(Cubic& y, double a, const Cubic& x) {
    for (int i = 0; i < 10; ++i) y[i] += a * x[i];
    return y;
}

Quadratic& axpy(Quadratic& y, double a, const Quadratic& x) {
    for (int i = 0; i < 6; ++i) y[i] += a * x[i];
    return y;
}

double monomial_integral_unit(const Exponent& e) {
    // int_T lambda^e dx = 2 |T| e0! e1! e2! / (|e| + 2)!
    return 2.0 * factorial(e[0]) * factorial(e[1]) * factorial(e[2]) / factorial(e[0] + e[1] + e[2] + 2);
}

double integral(const Quadratic& q, double area) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += q[i] * monomial_integral_unit(kQuadExponents[i]);
    return s * area;
}

double integral(const Cubic& p, double area) {
    double s = 0.0;
    for (int i = 0; i < 10; ++i) s += p[i] * monomial_integral_unit(kCubicExponents[i]);
    return s * area;
}

VectorCubic& VectorCubic::operator+=(const VectorCubic& o) {
    axpy(x, 1.0, o.x);
    axpy(y, 1.0, o.y);
    return *this;
}

VectorCubic& VectorCubic::operator*=(double s) {
    for (double& c : x) c *= s;
    for (double& c : y) c *= s;
    return *this;
}

double VectorCubic::max_abs() const {
    double m = 0.0;
    for (double c : x) m = std::max(m, std::abs(c));
    for (double c : y) m = std::max(m, std::abs(c));
    return m;
}

VectorCubic times(const Cubic& p, const Vec2& dir) {
    VectorCubic v;
    for (int i = 0; i < 10; ++i) {
        v.x[i] = p[i] * dir.x();
        v.y[i] = p[i] * dir.y();
    }
    return v;
}

Quadratic divergence(const VectorCubic& v, const TriangleGeom& g) {
    Quadratic q{};
    for (int k = 0; k < 3; ++k) {
        const Vec2 grad = hat_gradient(g, k);
        axpy(q, grad.x(), partial(v.x, k));
        axpy(q, grad.y(), partial(v.y, k));
    }
    return q;
}

double jacobian_norm(const VectorCubic& v, const TriangleGeom& g, const Vec3& bary) {
    return std::sqrt(gradient(v.x, g, bary).squaredNorm() + gradient(v.y, g, bary).squaredNorm());
}

Vec2 eval(const VectorCubic& v, const Vec3& bary) { return {eval(v.x, bary), eval(v.y, bary)}; }

const std::array<Vec3, 10>& cubic_nodes() {
    static const std::array<Vec3, 10> nodes = [] {
        std::array<Vec3, 10> n;
        for (int k = 0; k < 3; ++k) n[k] = Vec3::Unit(k);
        for (int k = 0; k < 3; ++k) {
            const int a = (k + 1) % 3, b = (k + 2) % 3;
            n[3 + 2 * k] = (2.0 * Vec3::Unit(a) + Vec3::Unit(b)) / 3.0;
            n[4 + 2 * k] = (Vec3::Unit(a) + 2.0 * Vec3::Unit(b)) / 3.0;
        }
        n[9] = Vec3::Constant(1.0 / 3.0);
        return n;
    }();
    return nodes;
}

const std::array<Vec3, 6>& quad_nodes() {
    static const std::array<Vec3, 6> nodes = [] {
        std::array<Vec3, 6> n;
        for (int k = 0; k < 3; ++k) n[k] = Vec3::Unit(k);
        for (int k = 0; k < 3; ++k) n[3 + k] = 0.5 * (Vec3::Unit((k + 1) % 3) + Vec3::Unit((k + 2) % 3));
        return n;
    }();
    return nodes;
}

const std::array<Cubic, 10>& cubic_lagrange_basis() {
    static const std::array<Cubic, 10> basis = [] {
        // Vandermonde V(i, m) = monomial m at node i; basis coefficients are columns of V^{-1}.
        Eigen::Matrix<double, 10, 10> V;
        const auto& nodes = cubic_nodes();
        for (int i = 0; i < 10; ++i) {
            for (int m = 0; m < 10; ++m) V(i, m) = eval(monomial(kCubicExponents[m]), nodes[i]);
        }
        const Eigen::Matrix<double, 10, 10> inv = V.inverse();
        std::array<Cubic, 10> b;
        for (int i = 0; i < 10; ++i) {
            for (int m = 0; m < 10; ++m) b[i][m] = inv(m, i);
        }
        return b;
    }();
    return basis;
}

const std::array<Quadratic, 6>& quad_lagrange_basis() {
    static const std::array<Quadratic, 6> basis = [] {
        Eigen::Matrix<double, 6, 6> V;
        const auto& nodes = quad_nodes();
        for (int i = 0; i < 6; ++i) {
            for (int m = 0; m < 6; ++m) {
                Quadratic mono{};
                mono[m] = 1.0;
                V(i, m) = eval(mono, nodes[i]);
            }
        }
        const Eigen::Matrix<double, 6, 6> inv = V.inverse();
        std::array<Quadratic, 6> b;
        for (int i = 0; i < 6; ++i) {
            for (int m = 0; m < 6; ++m) b[i][m] = inv(m, i);
        }
        return b;
    }();
    return basis;
}

Quadratic from_nodal(std::span<const double, 6> values) {
    Quadratic q{};
    const auto& basis = quad_lagrange_basis();
    for (int i = 0; i < 6; ++i) axpy(q, values[i], basis[i]);
    return q;
}

}  // namespace svstokes::poly
