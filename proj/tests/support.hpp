#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "svstokes/mesh.hpp"

namespace svtest {

using namespace svstokes;

/// Star-shaped patch around vertex 0 with jittered spoke lengths and angles.
inline Triangulation random_patch(int N, std::mt19937_64& rng, double length_jitter = 0.25, double angle_jitter = 0.2) {
    std::uniform_real_distribution<double> len(1.0 - length_jitter, 1.0 + length_jitter);
    std::uniform_real_distribution<double> ang(-angle_jitter, angle_jitter);
    generators::NgonOptions opt;
    opt.N = N;
    opt.radius = 1.0;
    for (int k = 0; k < N; ++k) {
        opt.length_factor.push_back(len(rng));
        opt.angle_offset.push_back(ang(rng) * 2.0 * std::numbers::pi / N);
    }
    return generators::ngon_patch(opt);
}

/// Two-triangle (or wider) fan around vertex 0 lying on the x-axis boundary.
inline Triangulation boundary_fan(int N, std::mt19937_64& rng, double jitter = 0.2) {
    std::uniform_real_distribution<double> len(0.8, 1.2);
    std::uniform_real_distribution<double> ang(-jitter, jitter);
    std::vector<Vec2> v{Vec2::Zero()};
    std::vector<Tri> t;
    const double step = std::numbers::pi / N;
    for (int k = 0; k <= N; ++k) {
        double a = k * step;
        if (k > 0 && k < N) a += ang(rng) * step;
        const double r = len(rng);
        v.emplace_back(r * std::cos(a), r * std::sin(a));
    }
    for (int k = 0; k < N; ++k) t.push_back({0, k + 1, k + 2});
    return make_triangulation(std::move(v), std::move(t));
}

inline bool close(double a, double b, double rel, double abs_floor = 1e-12) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1.0}) + abs_floor;
}

}  // namespace svtest
