#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "svstokes/classify.hpp"
#include "svstokes/mesh.hpp"
#include "svstokes/solver.hpp"
#include "svstokes/trees.hpp"

namespace svstokes {

inline constexpr const char* kVersion = "0.1.0";

struct AnalysisOptions {
    Tolerances tol;
    SolverOptions solver;
    bool skip_solver = false;
};

struct InvariantCheck {
    std::string name;
    bool ok = true;
};

struct Analysis {
    MeshClassification classification;
    TreeCover cover;
    HypothesisCheck hypotheses;
    std::optional<DivergenceAnalysis> divergence;
    std::vector<InvariantCheck> invariants;
    nlohmann::json json;

    bool invariants_ok() const;
};

/// classify -> trees -> solver, with a JSON report under the keys
/// mesh, vertices, trees, divergence, spline, meta.
Analysis analyze_mesh(const MeshTopology& topo, const AnalysisOptions& opt = {});

nlohmann::json mesh_json(const MeshTopology& topo);
nlohmann::json vertices_json(const MeshClassification& mc);
nlohmann::json trees_json(const MeshTopology& topo, const TreeCover& cover, const HypothesisCheck& h,
                          double tol_accept);
nlohmann::json divergence_json(const DivergenceAnalysis& d);
nlohmann::json spline_json(const SplineDims& s, const NullityCheck& n);
nlohmann::json meta_json(const AnalysisOptions& opt);

/// Mesh drawing: vertex classes by marker, optional pressure mode signs at the triangle corners.
std::string render_svg(const MeshTopology& topo, const MeshClassification& mc, const VertexValues* mode = nullptr);

}  // namespace svstokes
