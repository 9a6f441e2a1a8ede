#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "svstokes/classify.hpp"
#include "svstokes/fields.hpp"
#include "svstokes/mesh.hpp"

namespace svstokes {

/// Simple mesh path y_0..y_L with transfer weights.
struct Path {
    std::vector<int> vertices;
    std::vector<int> edges;             // e_i = {y_{i-1}, y_i}, i = 1..L stored at i-1
    std::vector<double> M_from;         // M_{e_i}^{y_{i-1}}
    std::vector<double> M_to;           // M_{e_i}^{y_i}
    std::vector<double> rho_tilde;      // rho~_{z, y_j}, j = 0..L
    std::vector<double> rho;            // rho_{z, y_j}, j = 1..L stored at j-1
    double rho_max = 1.0;               // rho(P); 1 for the empty path
    double min_weight = 0.0;
    bool acceptable = false;

    int length() const { return static_cast<int>(edges.size()); }
};

/// Throws InputError if `vertices` is not a simple path of the mesh.
Path path_stats(const MeshTopology& topo, const std::vector<int>& vertices, double tol_accept = 1e-8);

struct Tree {
    int root = -1;
    VertexClass root_class = VertexClass::SingularLI;
    std::vector<std::vector<int>> levels;  // levels[0] = {root}
    std::map<int, int> parent;             // vertex -> parent vertex
    std::map<int, int> parent_edge;

    std::vector<int> vertices() const;
    /// y_0 = v, ..., y_L = root.
    std::vector<int> path_to_root(int v) const;
    int depth() const { return static_cast<int>(levels.size()) - 1; }
};

struct TreeStats {
    double rho = 1.0;
    double upsilon = 0.0;
    int depth = 0;
    int size = 1;
    std::vector<int> level_sizes;
};

TreeStats tree_stats(const MeshTopology& topo, const Tree& tree, double tol_accept = 1e-8);

struct TreeCover {
    std::vector<Tree> trees;
    std::vector<int> owner;       // vertex -> tree index, -1 if uncovered
    std::vector<int> uncovered;   // interior vertices without a tree
    bool complete = false;        // every interior vertex is covered
};

/// Greedy multi-source breadth-first cover rooted at every locally interpolating vertex.
TreeCover build_tree_cover(const MeshTopology& topo, const MeshClassification& mc, const Tolerances& tol = {});

enum class Verdict { AllInteriorLocal, TreeCover, AcceptablePaths, None };
std::string to_string(Verdict v);

struct HypothesisCheck {
    Verdict verdict = Verdict::None;
    std::string narrative;
    std::vector<bool> reachable;   // acceptable path from vertex to some root
    double rho_bar = 1.0;
    double upsilon_bar = 0.0;
    double quasi_uniformity = 1.0; // max / min triangle diameter
};

HypothesisCheck check_hypotheses(const MeshTopology& topo, const MeshClassification& mc, const TreeCover& cover,
                                 const Tolerances& tol = {});

/// Per-triangle pressure values at the corners, indexed by slot.
using VertexValues = std::vector<std::array<double, 3>>;

/// Vertex values of div f on every triangle.
VertexValues divergence_vertex_values(const MeshTopology& topo, const PatchField& f);

/// Field with (div v)|_T(sigma) = p|_T(sigma) at every vertex and zero triangle means.
/// Throws ConstructionError when some vertex cannot be reached and InputError when
/// p violates the alternating constraint at a singular vertex.
PatchField tree_interpolant(const MeshTopology& topo, const MeshClassification& mc, const TreeCover& cover,
                            const VertexValues& p, const Tolerances& tol = {});

}  // namespace svstokes
