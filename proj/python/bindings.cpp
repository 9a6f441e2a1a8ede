#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "svstokes/errors.hpp"
#include "svstokes/mesh.hpp"
#include "svstokes/report.hpp"
#include "svstokes/solver.hpp"
#include "svstokes/suites.hpp"

namespace py = pybind11;
using namespace svstokes;

namespace {

AnalysisOptions options(bool skip_solver, bool seminorm, double tol_singular, double tol_rank, double tol_accept) {
    AnalysisOptions o;
    o.skip_solver = skip_solver;
    o.tol.singular = tol_singular;
    o.tol.rank = tol_rank;
    o.tol.accept = tol_accept;
    o.solver.tol_rank = tol_rank;
    o.solver.seminorm = seminorm;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Scott-Vogelius divergence analysis on triangulations";
    m.attr("__version__") = kVersion;

    static py::exception<ConstructionError> construction(m, "ConstructionError", PyExc_RuntimeError);
    static py::exception<NumericalIndeterminacy> indeterminate(m, "NumericalIndeterminacy", PyExc_ArithmeticError);
    static py::exception<InvariantViolation> invariant(m, "InvariantViolation", PyExc_AssertionError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def(
        "generate",
        [](const std::string& preset, int n, double L, int N, double radius, std::uint64_t seed, double amplitude) {
            generators::Params p;
            p.n = n;
            p.L = L;
            p.N = N;
            p.radius = radius;
            p.seed = seed;
            p.amplitude = amplitude;
            return format_mesh(generators::generate(preset, p));
        },
        py::arg("preset"), py::arg("n") = 2, py::arg("L") = 1.0, py::arg("N") = 6, py::arg("radius") = 1.0,
        py::arg("seed") = 1, py::arg("amplitude") = 0.15, "Mesh preset in the plain-text mesh format.");

    m.def(
        "analyze",
        [](const std::string& mesh, bool skip_solver, bool seminorm, double tol_singular, double tol_rank,
           double tol_accept) {
            const MeshTopology topo(load_mesh(mesh));
            Analysis a;
            {
                py::gil_scoped_release release;
                a = analyze_mesh(topo, options(skip_solver, seminorm, tol_singular, tol_rank, tol_accept));
            }
            return a.json.dump();
        },
        py::arg("mesh"), py::arg("skip_solver") = false, py::arg("seminorm") = false, py::arg("tol_singular") = 1e-10,
        py::arg("tol_rank") = 1e-9, py::arg("tol_accept") = 1e-8, "Full analysis report as a JSON string.");

    m.def(
        "verify_fields",
        [](const std::string& mesh, int samples, std::uint64_t seed) {
            const MeshTopology topo(load_mesh(mesh));
            SuiteOptions opt;
            opt.samples = samples;
            opt.seed = seed;
            return suites_json(run_field_suites(topo, opt), opt).dump();
        },
        py::arg("mesh"), py::arg("samples") = 10, py::arg("seed") = 1, "Field property suites as a JSON string.");

    m.def(
        "divergence_matrix",
        [](const std::string& mesh) {
            const MeshTopology topo(load_mesh(mesh));
            return assemble_divergence(topo, number_dofs(topo));
        },
        py::arg("mesh"), "Pressure-by-velocity matrix of the divergence pairing.");

    m.def(
        "render_svg",
        [](const std::string& mesh) {
            const MeshTopology topo(load_mesh(mesh));
            return render_svg(topo, classify_mesh(topo, {}));
        },
        py::arg("mesh"));
}
