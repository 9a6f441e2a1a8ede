#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "svstokes/classify.hpp"
#include "svstokes/fields.hpp"
#include "svstokes/mesh.hpp"
#include "svstokes/trees.hpp"

namespace svstokes {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct DofKey {
    enum class Entity { Vertex, Edge, Triangle } entity;
    int index;  // mesh entity id
    int slot;   // node on the entity (edge nodes: 0 nearer edge.v[0])
    int comp;   // 0 = x, 1 = y
};

/// Interior cubic Lagrange nodes (vertices, then edges, then triangles) with two
/// components each, and discontinuous P2 pressure with six values per triangle.
struct DofMap {
    int n_nodes = 0;
    int n_velocity = 0;
    int n_pressure = 0;
    std::vector<int> vertex_node;              // -1 on the boundary
    std::vector<std::array<int, 2>> edge_node; // -1 on boundary edges
    std::vector<int> triangle_node;
    std::vector<DofKey> velocity_keys;

    /// Global node of each local cubic node of triangle t, -1 if constrained.
    std::array<int, 10> local_nodes(const MeshTopology& topo, int t) const;
    static int velocity_dof(int node, int comp) { return 2 * node + comp; }
    static int pressure_dof(int t, int k) { return 6 * t + k; }
};

DofMap number_dofs(const MeshTopology& topo);

/// B[q, v] = integral of q_basis * div(v_basis).
Matrix assemble_divergence(const MeshTopology& topo, const DofMap& dm);

struct Norms {
    Matrix A;  // velocity Gram matrix: stiffness (+ mass unless seminorm)
    Matrix M;  // pressure mass matrix
};

Norms assemble_norms(const MeshTopology& topo, const DofMap& dm, bool seminorm = false);

/// Rows: the mean functional, then the alternating functional at each singular vertex.
Matrix pressure_constraints(const MeshTopology& topo, const MeshClassification& mc, const DofMap& dm);
/// Orthonormal basis of the null space of C.
Matrix constrained_basis(const Matrix& C);

struct RankResult {
    int rank = 0;
    int nullity = 0;
    int expected_dim = 0;  // 6T - 1 - sigma
    int K = 0;
    double sigma_max = 0.0;
    double accepted_min = 0.0;
    double rejected_max = 0.0;  // 0 if none
    double gap = 0.0;           // accepted_min / rejected_max, inf if none
    std::vector<double> singular_values;
};

/// Throws NumericalIndeterminacy when the singular values around the threshold
/// are not separated by a factor 10, InvariantViolation when K < 0.
RankResult divergence_rank(const Matrix& B, const MeshTopology& topo, int sigma, double tol = 1e-9);

struct InfSup {
    double beta = 0.0;       // smallest nonzero generalised singular value
    double beta_full = 0.0;  // smallest over all of Q_h^2 (0 when a spurious mode exists)
    int zero_modes = 0;
    std::vector<double> eigenvalues;  // ascending
};

InfSup infsup_constant(const Matrix& A, const Matrix& B, const Matrix& M, const Matrix& Qb, double tol = 1e-10);

/// M-orthonormal pressures q = Qb y with B^T q = 0, one per column.
Matrix spurious_modes(const Matrix& B, const Matrix& M, const Matrix& Qb, double tol = 1e-9);

/// Values of a pressure coefficient vector at the triangle corners.
VertexValues pressure_vertex_values(const MeshTopology& topo, const Vector& q);

/// Fraction of interior vertices around which the nonzero corner values of q
/// alternate in sign (zeros skipped). Vertices where q vanishes are not counted.
double alternation_fraction(const MeshTopology& topo, const VertexValues& q, double tol = 1e-8);

struct SplineDims {
    int raw = 0;             // 2E0 - E + 3V0 + sigma + K
    int dim_s4 = 0;          // clamped at 0
    int strang = 0;          // E + 4V - V0 + sigma_i
    int identity_lhs = 0;    // dim_s4 + 6(E - E0) - sigma_b
    bool hypothesis = false; // E0 + 3V0 + sigma >= E - E0
    bool identity_applies = false;
    bool identity_holds = false;
    std::string caveat;
};

SplineDims strang_dimensions(const MeshCounts& c, int sigma_i, int sigma_b, int K);

struct NullityCheck {
    int nullity = 0;
    int predicted = 0;
    bool ok = false;
};

NullityCheck nullity_crosscheck(const RankResult& r, const SplineDims& s);

/// Coefficients of a zero-trace cubic field in the velocity basis.
Vector velocity_coefficients(const MeshTopology& topo, const DofMap& dm, const PatchField& f);

/// max |C M^-1 B| relative to max |M^-1 B|: divergences land in Q_h^2.
double range_inclusion_residual(const Matrix& B, const Matrix& M, const Matrix& C);

struct SolverOptions {
    double tol_rank = 1e-9;
    double tol_zero = 1e-10;
    bool seminorm = false;
    bool infsup = true;
    int max_velocity_dofs = 3000;
};

struct DivergenceAnalysis {
    int n_velocity = 0, n_pressure = 0;
    RankResult rank;
    bool has_infsup = false;
    InfSup infsup;
    Matrix modes;  // spurious pressure modes, one per column
    double mode_alternation = 0.0;
    SplineDims spline;
    NullityCheck nullity;
    double range_residual = 0.0;
};

/// Full dense pipeline. Throws InputError above the DOF cap.
DivergenceAnalysis analyze_divergence(const MeshTopology& topo, const MeshClassification& mc,
                                      const SolverOptions& opt = {});

void write_matrix_market(std::ostream& os, const Matrix& m, double drop = 0.0);

}  // namespace svstokes
