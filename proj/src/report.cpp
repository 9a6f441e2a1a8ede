#include "svstokes/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace svstokes {

namespace {

nlohmann::json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

}  // namespace

bool Analysis::invariants_ok() const {
    return std::all_of(invariants.begin(), invariants.end(), [](const InvariantCheck& c) { return c.ok; });
}

nlohmann::json mesh_json(const MeshTopology& topo) {
    const MeshCounts& c = topo.counts();
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (int t = 0; t < topo.num_triangles(); ++t) {
        dmin = std::min(dmin, topo.geom(t).diameter());
        dmax = std::max(dmax, topo.geom(t).diameter());
    }
    return {{"T", c.T},
            {"E", c.E},
            {"E0", c.E0},
            {"V", c.V},
            {"V0", c.V0},
            {"components", c.components},
            {"boundary_loops", c.boundary_loops},
            {"euler_ok", c.euler_ok},
            {"simply_connected", c.simply_connected()},
            {"h_max", dmax},
            {"h_min", dmin}};
}

nlohmann::json vertices_json(const MeshClassification& mc) {
    nlohmann::json list = nlohmann::json::array();
    for (const VertexReport& r : mc.reports) {
        nlohmann::json v{{"vertex", r.vertex},
                         {"interior", r.interior},
                         {"N", r.N},
                         {"theta", r.theta},
                         {"singular", r.singular},
                         {"status", to_string(r.status)}};
        if (r.has_d) {
            v["D"] = {r.D[0], r.D[1], r.D[2]};
            v["scaled"] = {r.scaled[0], r.scaled[1], r.scaled[2]};
            v["chosen"] = r.chosen;
            v["conditioning"] = number(r.conditioning);
        }
        list.push_back(std::move(v));
    }
    return {{"counts",
             {{"SingularLI", mc.singular_li},
              {"OddLI", mc.odd_li},
              {"EvenLI", mc.even_li},
              {"NotLI", mc.not_li},
              {"BoundaryNonSingular", mc.boundary_nonsingular}}},
            {"sigma", mc.sigma},
            {"sigma_i", mc.sigma_i},
            {"sigma_b", mc.sigma_b},
            {"list", list}};
}

nlohmann::json trees_json(const MeshTopology& topo, const TreeCover& cover, const HypothesisCheck& h,
                          double tol_accept) {
    nlohmann::json trees = nlohmann::json::array();
    for (const Tree& t : cover.trees) {
        const TreeStats s = tree_stats(topo, t, tol_accept);
        trees.push_back({{"root", t.root},
                         {"root_class", to_string(t.root_class)},
                         {"vertices", t.vertices()},
                         {"depth", s.depth},
                         {"rho", s.rho},
                         {"upsilon", s.upsilon}});
    }
    return {{"verdict", to_string(h.verdict)},
            {"narrative", h.narrative},
            {"complete", cover.complete},
            {"uncovered", cover.uncovered},
            {"rho_bar", h.rho_bar},
            {"upsilon_bar", h.upsilon_bar},
            {"quasi_uniformity", h.quasi_uniformity},
            {"trees", trees}};
}

nlohmann::json divergence_json(const DivergenceAnalysis& d) {
    nlohmann::json j{{"velocity_dofs", d.n_velocity},
                     {"pressure_dofs", d.n_pressure},
                     {"rank", d.rank.rank},
                     {"nullity", d.rank.nullity},
                     {"expected_dim", d.rank.expected_dim},
                     {"K", d.rank.K},
                     {"sigma_max", d.rank.sigma_max},
                     {"singular_gap", number(d.rank.gap)},
                     {"spurious_modes", d.modes.cols()},
                     {"mode_alternation", d.mode_alternation},
                     {"range_residual", d.range_residual}};
    if (d.has_infsup) {
        j["beta"] = d.infsup.beta;
        j["beta_full"] = d.infsup.beta_full;
        j["zero_modes"] = d.infsup.zero_modes;
    } else {
        j["beta"] = nullptr;
        j["beta_full"] = nullptr;
        j["zero_modes"] = nullptr;
    }
    return j;
}

nlohmann::json spline_json(const SplineDims& s, const NullityCheck& n) {
    return {{"raw", s.raw},
            {"dim_S4", s.dim_s4},
            {"strang", s.strang},
            {"identity_lhs", s.identity_lhs},
            {"hypothesis", s.hypothesis},
            {"identity_applies", s.identity_applies},
            {"identity_holds", s.identity_holds},
            {"caveat", s.caveat},
            {"nullity", n.nullity},
            {"nullity_matches", n.ok}};
}

nlohmann::json meta_json(const AnalysisOptions& opt) {
    return {{"version", kVersion},
            {"tolerances",
             {{"singular", opt.tol.singular},
              {"interp", opt.tol.interp},
              {"accept", opt.tol.accept},
              {"rank", opt.solver.tol_rank}}},
            {"seminorm", opt.solver.seminorm},
            {"skip_solver", opt.skip_solver}};
}

Analysis analyze_mesh(const MeshTopology& topo, const AnalysisOptions& opt) {
    Analysis a;
    a.classification = classify_mesh(topo, opt.tol);
    a.cover = build_tree_cover(topo, a.classification, opt.tol);
    a.hypotheses = check_hypotheses(topo, a.classification, a.cover, opt.tol);

    a.json["mesh"] = mesh_json(topo);
    a.json["vertices"] = vertices_json(a.classification);
    a.json["trees"] = trees_json(topo, a.cover, a.hypotheses, opt.tol.accept);
    a.json["divergence"] = nullptr;
    a.json["spline"] = nullptr;

    if (!opt.skip_solver) {
        a.divergence = analyze_divergence(topo, a.classification, opt.solver);
        const DivergenceAnalysis& d = *a.divergence;
        a.json["divergence"] = divergence_json(d);
        a.json["spline"] = spline_json(d.spline, d.nullity);
        a.invariants.push_back({"nullity matches the dimension formula", d.nullity.ok});
        a.invariants.push_back({"divergence lands in the constrained pressure space", d.range_residual < 1e-10});
        a.invariants.push_back({"rank plus nullity equals velocity dofs", d.rank.rank + d.rank.nullity == d.n_velocity});
        if (d.spline.identity_applies) {
            a.invariants.push_back({"Strang identity", d.spline.identity_holds});
        }
        if (a.hypotheses.verdict != Verdict::None) {
            a.invariants.push_back({"covered meshes have K = 0", d.rank.K == 0});
        }
        if (d.has_infsup) {
            a.invariants.push_back({"zero Schur modes match K", d.infsup.zero_modes == d.rank.K});
        }
    }
    a.json["meta"] = meta_json(opt);
    nlohmann::json inv = nlohmann::json::array();
    for (const InvariantCheck& c : a.invariants) inv.push_back({{"name", c.name}, {"ok", c.ok}});
    a.json["meta"]["invariants"] = inv;
    return a;
}

std::string render_svg(const MeshTopology& topo, const MeshClassification& mc, const VertexValues* mode) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int v = 0; v < topo.num_vertices(); ++v) {
        const Vec2& p = topo.point(v);
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
        ymin = std::min(ymin, p.y());
        ymax = std::max(ymax, p.y());
    }
    const double size = 600.0, margin = 20.0;
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
    const double s = (size - 2 * margin) / span;
    auto X = [&](const Vec2& p) { return margin + (p.x() - xmin) * s; };
    auto Y = [&](const Vec2& p) { return size - margin - (p.y() - ymin) * s; };

    double hmin = 1e300;
    for (int t = 0; t < topo.num_triangles(); ++t) hmin = std::min(hmin, topo.geom(t).diameter());
    const double r = std::clamp(0.08 * hmin * s, 2.0, 8.0);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
       << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int t = 0; t < topo.num_triangles(); ++t) {
        os << "<polygon points=\"";
        for (int v : topo.triangle(t)) os << X(topo.point(v)) << ',' << Y(topo.point(v)) << ' ';
        os << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    }
    if (mode) {
        double scale = 0.0;
        for (const auto& a : *mode) {
            for (double x : a) scale = std::max(scale, std::abs(x));
        }
        for (int t = 0; t < topo.num_triangles(); ++t) {
            const TriangleGeom& g = topo.geom(t);
            const Vec2 c = (g.point[0] + g.point[1] + g.point[2]) / 3.0;
            for (int k = 0; k < 3; ++k) {
                const double v = (*mode)[t][k];
                const char* col = std::abs(v) <= 1e-8 * scale ? "#bbbbbb" : (v > 0 ? "#d62728" : "#1f77b4");
                const Vec2 p = 0.7 * g.point[k] + 0.3 * c;
                os << "<circle cx=\"" << X(p) << "\" cy=\"" << Y(p) << "\" r=\"" << 0.6 * r << "\" fill=\"" << col
                   << "\"/>\n";
            }
        }
    }
    for (const VertexReport& rep : mc.reports) {
        const Vec2& p = topo.point(rep.vertex);
        const double x = X(p), y = Y(p);
        switch (rep.status) {
            case VertexClass::SingularLI:
                os << "<rect x=\"" << x - r << "\" y=\"" << y - r << "\" width=\"" << 2 * r << "\" height=\"" << 2 * r
                   << "\" fill=\"black\"/>\n";
                break;
            case VertexClass::OddLI:
                os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r << "\" fill=\"#2ca02c\"/>\n";
                break;
            case VertexClass::EvenLI:
                os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r << "\" fill=\"#1f77b4\"/>\n";
                break;
            case VertexClass::NotLI:
                os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r
                   << "\" fill=\"white\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
                break;
            case VertexClass::BoundaryNonSingular:
                os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << 0.6 * r << "\" fill=\"#7f7f7f\"/>\n";
                break;
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace svstokes
