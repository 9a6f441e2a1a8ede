#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "svstokes/mesh.hpp"

namespace svstokes {

struct Tolerances {
    double singular = 1e-10;  // Theta(z) <= singular
    double interp = 1e-8;     // |D_i| h_z^s > interp
    double accept = 1e-8;     // |M_e^z| > accept
    double rank = 1e-9;       // sigma_k > rank * sigma_max
};

/// Theta(z): max |sin| of consecutive angle pairs (cyclic for interior
/// vertices). Zero for a boundary vertex with a single triangle.
double theta(const VertexPatch& patch);
bool is_singular(const VertexPatch& patch, double tol);

/// A_h^z: sum_j (-1)^{j-1} q_j over the patch ordering.
double alternating_functional(const VertexPatch& patch, std::span<const double> values);
double alternating_sum(std::span<const double> values);

/// Coefficients of the corrector fields at an interior vertex.
/// Vectors are indexed j-1 for triangle T_j.
struct DCoefficients {
    int N = 0;
    std::vector<std::array<double, 2>> b;  // b_{j1}, b_{j2}
    std::vector<std::array<double, 2>> c;  // prefix sums; c[N-1] ~ 0
    std::vector<double> d0;                // d_{j0}, without the factor 12
    std::vector<std::array<double, 2>> d;  // d_{j1}, d_{j2}
    std::array<double, 3> D{};             // D_0, D_1, D_2
    // Closed forms used as cross-checks.
    double D0_closed = 0.0;
    std::array<double, 2> D_closed{};
    /// |D_i| h_z^s with s = 2 for i = 0 and s = 1 otherwise.
    std::array<double, 3> scaled{};
};

/// Throws GeometryError for boundary vertices.
DCoefficients compute_dcoefficients(const VertexPatch& patch);

/// M_e^z = cot(phi_1) + cot(phi_2). Throws GeometryError for boundary edges.
double edge_weight(const MeshTopology& topo, int edge, int z);

enum class VertexClass { SingularLI, OddLI, EvenLI, NotLI, BoundaryNonSingular };

std::string to_string(VertexClass c);
inline bool in_lh(VertexClass c) {
    return c == VertexClass::SingularLI || c == VertexClass::OddLI || c == VertexClass::EvenLI;
}

struct VertexReport {
    int vertex = -1;
    bool interior = false;
    int N = 0;
    double theta = 0.0;
    bool singular = false;
    VertexClass status = VertexClass::NotLI;
    int chosen = -1;                   // i in {0,1,2} for EvenLI
    bool has_d = false;                // D values computed (interior, non-singular, even)
    std::array<double, 3> D{};
    std::array<double, 3> scaled{};
    double conditioning = 1.0;         // 1 + 1/(|D_i| h_z^s) for EvenLI; inf for NotLI
};

VertexReport classify_vertex(const VertexPatch& patch, const Tolerances& tol);

struct MeshClassification {
    std::vector<VertexReport> reports;
    int singular_li = 0, odd_li = 0, even_li = 0, not_li = 0, boundary_nonsingular = 0;
    int sigma = 0, sigma_i = 0, sigma_b = 0;
};

MeshClassification classify_mesh(const MeshTopology& topo, const Tolerances& tol);

}  // namespace svstokes
