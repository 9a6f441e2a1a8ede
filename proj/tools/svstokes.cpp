// svstokes command-line tool: gen | analyze | verify-fields | infsup | spline-dim
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "svstokes/errors.hpp"
#include "svstokes/mesh.hpp"
#include "svstokes/report.hpp"
#include "svstokes/solver.hpp"
#include "svstokes/suites.hpp"

using namespace svstokes;

namespace {

enum Exit { kOk = 0, kInput = 2, kIndeterminate = 3, kInvariant = 4 };

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path);
    f << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct Common {
    std::string mesh;
    std::string out;
    double tol_singular = 1e-10;
    double tol_rank = 1e-9;
    double tol_accept = 1e-8;
    bool seminorm = false;

    AnalysisOptions options() const {
        AnalysisOptions o;
        o.tol.singular = tol_singular;
        o.tol.accept = tol_accept;
        o.tol.rank = tol_rank;
        o.solver.tol_rank = tol_rank;
        o.solver.seminorm = seminorm;
        return o;
    }
};

void add_common(CLI::App* cmd, Common& c, bool tolerances = true) {
    cmd->add_option("--mesh", c.mesh, "mesh file")->required();
    cmd->add_option("--out", c.out, "output file (default stdout)");
    if (tolerances) {
        cmd->add_option("--tol-singular", c.tol_singular, "singular vertex threshold on Theta(z)");
        cmd->add_option("--tol-rank", c.tol_rank, "relative singular-value threshold");
        cmd->add_option("--tol-accept", c.tol_accept, "threshold on |M_e^z| for acceptable edges");
        cmd->add_flag("--seminorm", c.seminorm, "use the H1 seminorm in the inf-sup quotient");
    }
}

MeshTopology read_mesh(const std::string& path) { return MeshTopology(load_mesh_file(path)); }

int run(int argc, char** argv) {
    CLI::App app{"Scott-Vogelius divergence and inf-sup analysis on triangulations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a mesh preset");
    std::string preset, gen_out;
    generators::Params params;
    gen->add_option("preset", preset, "crossed | type1 | three_lines | ngon | perturbed")->required();
    gen->add_option("--n", params.n, "cells per side / rings");
    gen->add_option("--L", params.L, "cell side length");
    gen->add_option("--N", params.N, "valence of the ngon patch");
    gen->add_option("--radius", params.radius, "ngon radius");
    gen->add_option("--seed", params.seed, "seed for perturbed meshes");
    gen->add_option("--amplitude", params.amplitude, "relative vertex jitter for perturbed meshes");
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "classify vertices, build trees, certify the divergence");
    Common ac;
    std::string svg;
    bool skip_solver = false;
    add_common(analyze, ac);
    analyze->add_option("--svg", svg, "write an SVG rendering");
    analyze->add_flag("--skip-solver", skip_solver, "topology and trees only");

    // verify-fields
    auto* verify = app.add_subcommand("verify-fields", "run the field property suites");
    Common vc;
    int samples = 10;
    std::uint64_t seed = 1;
    bool corrupt = false;
    add_common(verify, vc);
    verify->add_option("--samples", samples, "random targets per vertex");
    verify->add_option("--seed", seed, "random seed");
    verify->add_flag("--corrupt", corrupt)->group("");

    // infsup
    auto* infsup = app.add_subcommand("infsup", "rank, K, inf-sup constant and spurious modes");
    Common ic;
    std::string export_dir;
    add_common(infsup, ic);
    infsup->add_option("--export", export_dir, "directory for B, A, M in MatrixMarket format");

    // spline-dim
    auto* spline = app.add_subcommand("spline-dim", "spline dimension arithmetic");
    Common sc;
    add_common(spline, sc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    if (gen->parsed()) {
        write_text(gen_out, format_mesh(generators::generate(preset, params)));
        return kOk;
    }

    if (analyze->parsed()) {
        const MeshTopology topo = read_mesh(ac.mesh);
        AnalysisOptions opt = ac.options();
        opt.skip_solver = skip_solver;
        const Analysis a = analyze_mesh(topo, opt);
        write_text(ac.out, dump(a.json));
        if (!svg.empty()) {
            std::optional<VertexValues> mode;
            if (a.divergence && a.divergence->modes.cols() > 0) {
                mode = pressure_vertex_values(topo, a.divergence->modes.col(0));
            }
            write_text(svg, render_svg(topo, a.classification, mode ? &*mode : nullptr));
        }
        return a.invariants_ok() ? kOk : kInvariant;
    }

    if (verify->parsed()) {
        const MeshTopology topo = read_mesh(vc.mesh);
        SuiteOptions so;
        so.samples = samples;
        so.seed = seed;
        so.corrupt = corrupt;
        so.tol = vc.options().tol;
        const auto suites = run_field_suites(topo, so);
        const nlohmann::json j = suites_json(suites, so);
        write_text(vc.out, dump(j));
        return j["passed"].get<bool>() ? kOk : kInvariant;
    }

    if (infsup->parsed()) {
        const MeshTopology topo = read_mesh(ic.mesh);
        const AnalysisOptions opt = ic.options();
        const MeshClassification mc = classify_mesh(topo, opt.tol);
        const DivergenceAnalysis d = analyze_divergence(topo, mc, opt.solver);
        nlohmann::json j = divergence_json(d);
        j["modes"] = nlohmann::json::array();
        for (int c = 0; c < d.modes.cols(); ++c) {
            const VertexValues vv = pressure_vertex_values(topo, d.modes.col(c));
            j["modes"].push_back(vv);
        }
        if (!export_dir.empty()) {
            std::filesystem::create_directories(export_dir);
            const DofMap dm = number_dofs(topo);
            const Norms nm = assemble_norms(topo, dm, opt.solver.seminorm);
            const std::pair<const char*, const Matrix*> mats[] = {{"B.mtx", nullptr}, {"A.mtx", &nm.A}, {"M.mtx", &nm.M}};
            const Matrix B = assemble_divergence(topo, dm);
            for (const auto& [name, m] : mats) {
                std::ofstream f(std::filesystem::path(export_dir) / name);
                if (!f) throw InputError("cannot write into " + export_dir);
                write_matrix_market(f, m ? *m : B);
            }
        }
        write_text(ic.out, dump(j));
        return kOk;
    }

    if (spline->parsed()) {
        const MeshTopology topo = read_mesh(sc.mesh);
        const AnalysisOptions opt = sc.options();
        const MeshClassification mc = classify_mesh(topo, opt.tol);
        SolverOptions so = opt.solver;
        so.infsup = false;
        const DivergenceAnalysis d = analyze_divergence(topo, mc, so);
        nlohmann::json j = spline_json(d.spline, d.nullity);
        j["K"] = d.rank.K;
        j["sigma_i"] = mc.sigma_i;
        j["sigma_b"] = mc.sigma_b;
        write_text(sc.out, dump(j));
        return d.nullity.ok && (!d.spline.identity_applies || d.spline.identity_holds) ? kOk : kInvariant;
    }
    return kInput;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const NumericalIndeterminacy& e) {
        std::cerr << "numerically indeterminate: " << e.what() << '\n';
        return kIndeterminate;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInvariant;
    }
}
