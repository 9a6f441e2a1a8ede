#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "svstokes/classify.hpp"
#include "svstokes/mesh.hpp"

namespace svstokes {

struct SuiteResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    double max_deviation = 0.0;
    std::vector<std::string> messages;  // first few failures

    bool passed() const { return failures == 0; }
};

struct SuiteOptions {
    int samples = 10;
    std::uint64_t seed = 1;
    Tolerances tol;
    bool trees = true;
    bool corrupt = false;  // perturb the local interpolants; negative control
};

/// Property suites for the edge fields (w, chi, xi, kappa), the local, boundary,
/// edge and path constructions, and the tree interpolant round trip.
std::vector<SuiteResult> run_field_suites(const MeshTopology& topo, const SuiteOptions& opt = {});

nlohmann::json suites_json(const std::vector<SuiteResult>& suites, const SuiteOptions& opt);

}  // namespace svstokes
