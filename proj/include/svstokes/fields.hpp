#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "svstokes/classify.hpp"
#include "svstokes/mesh.hpp"
#include "svstokes/polynomial.hpp"

namespace svstokes {

/// Piecewise cubic vector field. Each piece is expressed in the barycentric
/// monomials of its triangle, with slots following `MeshTopology::triangle`.
struct PatchField {
    std::map<int, poly::VectorCubic> pieces;

    PatchField& operator+=(const PatchField& o);
    PatchField& operator-=(const PatchField& o);
    PatchField& operator*=(double s);
    PatchField& axpy(double a, const PatchField& o);
    std::vector<int> support() const;
    double max_abs() const;
    bool empty() const { return pieces.empty(); }
};

PatchField operator+(PatchField a, const PatchField& b);
PatchField operator-(PatchField a, const PatchField& b);
PatchField operator*(double s, PatchField a);

/// Piecewise cubic scalar (eta, kappa).
struct ScalarField {
    std::map<int, poly::Cubic> pieces;
};

// ---- scalar building blocks -------------------------------------------------

/// eta_e^z = psi_z^2 psi_y on the triangles of e = {z, y}.
ScalarField eta(const MeshTopology& topo, int edge, int z);
/// kappa_e^z = psi_z^2 psi_y - psi_z psi_y / 2. Throws GeometryError on boundary edges.
ScalarField kappa(const MeshTopology& topo, int edge, int z);
double edge_integral(const MeshTopology& topo, const ScalarField& f, int edge);
Vec2 scalar_gradient(const MeshTopology& topo, const ScalarField& f, int triangle, int vertex);

// ---- vector fields ----------------------------------------------------------

/// w_e^z = |e| t_e^z eta_e^z for an interior edge e containing z.
PatchField basis_w(const MeshTopology& topo, int edge, int z);
/// w_i for spoke i of the patch (1-based).
PatchField basis_w(const MeshTopology& topo, const VertexPatch& patch, int i);
/// chi_i = 12/|e_i| eta_{e_i} n_i (interior patch).
PatchField basis_chi(const MeshTopology& topo, const VertexPatch& patch, int i);
PatchField basis_chi_sum(const MeshTopology& topo, const VertexPatch& patch);
/// psi_z^2 E_i, i in {1, 2}.
PatchField basis_xi_tilde(const MeshTopology& topo, const VertexPatch& patch, int i);
/// xi_tilde_i - sum_{j<N} c_{ji} chi_j.
PatchField basis_xi(const MeshTopology& topo, const VertexPatch& patch, int i, const DCoefficients& dc);
/// kappa_e^z times a constant direction.
PatchField kappa_field(const MeshTopology& topo, int edge, int z, const Vec2& dir);

// ---- evaluation -------------------------------------------------------------

/// (div f)|_T(v). Throws InputError if T is outside the support.
double eval_divergence_at_vertex(const MeshTopology& topo, const PatchField& f, int triangle, int vertex);
/// Same, but zero outside the support.
double vertex_divergence(const MeshTopology& topo, const PatchField& f, int triangle, int vertex);
/// Values (div f)|_{T_j}(z) over the patch ordering.
std::vector<double> patch_divergence(const MeshTopology& topo, const PatchField& f, const VertexPatch& patch);
double triangle_integral_divergence(const MeshTopology& topo, const PatchField& f, int triangle);
double triangle_mean_divergence(const MeshTopology& topo, const PatchField& f, int triangle);
Vec2 eval_field(const MeshTopology& topo, const PatchField& f, int triangle, const Vec3& bary);
/// max |grad f| sampled on a barycentric grid with `k` subdivisions per edge.
double max_gradient(const MeshTopology& topo, const PatchField& f, int k = 6);

// ---- interpolation ----------------------------------------------------------

/// Divergence targets at z, one per patch triangle.
struct WTarget {
    int z = -1;
    std::vector<double> a;
};

/// Field in V_{h,00}^3(z) with (div v)|_{T_j}(z) = a_j.
/// Throws ConstructionError if z is not locally interpolating and
/// InputError if the target is outside W(z).
PatchField local_interpolant(const MeshTopology& topo, const VertexPatch& patch, const VertexReport& report,
                             const WTarget& target);

struct BoundaryInterpolant {
    PatchField field;
    int pivot = 0;                 // s, 1-based
    int polluted = -1;             // y_s
    std::map<int, double> spill;   // triangle -> (div v)|_T(y_s)
};

/// Boundary, non-singular z with N >= 2. The pivot is chosen among spokes
/// whose far end is an interior vertex. Throws ConstructionError if none exists.
BoundaryInterpolant boundary_interpolant(const MeshTopology& topo, const VertexPatch& patch,
                                         const std::vector<double>& p, double tol_singular = 1e-10);

struct EdgeTransfer {
    PatchField field;
    int z = -1, y = -1, edge = -1;
    int k1 = -1, k2 = -1;          // triangles sharing the edge (before / after it around z)
    double spill1 = 0, spill2 = 0; // (div v)|_{K_i}(y), read off the polynomial
    double s = 0;                  // alternating sum of a used by the construction
    double M = 0;                  // M_e^z
    double theta1 = 0, theta2 = 0; // angles at y
};

/// Transfers targets `a` at z across e = {z, y}. The alternating sum is taken
/// starting at the triangle before e and running clockwise around z.
EdgeTransfer edge_transfer(const MeshTopology& topo, int z, int edge, const std::vector<double>& a,
                           double tol_accept = 1e-8);

struct PathInterpolant {
    PatchField field;
    std::vector<int> path;
    int k1 = -1, k2 = -1;            // triangles sharing the last edge
    double spill1 = 0, spill2 = 0;   // actual end spill
    double predicted1 = 0, predicted2 = 0;  // |s(a)| rho_tilde |cot theta_i| / |M|
    double s = 0;
};

PathInterpolant path_interpolant(const MeshTopology& topo, const std::vector<int>& path, const std::vector<double>& a,
                                 double tol_accept = 1e-8);

// ---- verification -----------------------------------------------------------

struct FieldExpectation {
    /// (triangle, vertex) -> expected divergence; unlisted pairs expect 0
    /// unless the vertex is in `free_vertices`.
    std::map<std::pair<int, int>, double> vertex_values;
    std::set<int> free_vertices;
    bool mean_zero = true;
    std::map<int, double> integrals;     // used when !mean_zero
    std::optional<std::set<int>> support;
    std::vector<int> singular_vertices;  // A_h^sigma(div f) must vanish there
    double tol = 1e-9;                   // relative, divergence values
    double tol_zero = 1e-10;             // relative, exact-zero targets
};

struct FieldCheck {
    std::string name;
    bool passed = true;
    double deviation = 0.0;
};

struct FieldReport {
    std::vector<FieldCheck> checks;
    bool passed() const;
    std::string summary() const;
};

FieldReport verify_field(const MeshTopology& topo, const PatchField& f, const FieldExpectation& expect);

/// {"<triangle>": {"x": [10 coeffs], "y": [10 coeffs]}, ...}
std::string field_to_json(const PatchField& f);

}  // namespace svstokes
