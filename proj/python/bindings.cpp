#include "a2mt/generators.hpp"
#include "a2mt/json_io.hpp"
#include "a2mt/kingman.hpp"
#include "a2mt/shape_stats.hpp"
#include "a2mt/triangulation.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace a2mt;
using io::json;

// Structured values cross the boundary as JSON text in the CLI file formats;
// the Python package wraps these calls with json.loads/json.dumps.

namespace {

std::string decode_json(const std::string& text) {
    const json doc = json::parse(text);
    const Triangulation t = io::triangulation_from_json(doc);
    ArcTwoLevelMeasure k;
    if (doc.contains("measure")) {
        k = io::arc_measure_from_json(doc.at("measure"), t.n);
    } else {
        k.components.push_back({Rational(1), t.arc_lengths});
    }
    return io::a2m_to_json(dual_tree(t, k)).dump();
}

std::string encode_json(const std::string& text, std::optional<Vertex> root, const std::vector<Vertex>& flips) {
    const A2mTree chi = io::a2m_from_json(json::parse(text));
    const Vertex rho = root ? *root : leaves_of(chi.tree).front();
    const EncodeResult r = encode_tree(chi, rho, std::set<Vertex>(flips.begin(), flips.end()));
    json out = io::triangulation_to_json(r.triangulation);
    out["measure"] = io::arc_measure_to_json(r.measure);
    out["leaf_of_arc"] = r.leaf_of_arc;
    return out.dump();
}

std::string xi_json(const std::string& text) {
    const A2mTree chi = io::a2m_from_json(json::parse(text));
    return io::measure_to_json(branch_point_distribution(chi.tree, intensity(chi.nu))).dump();
}

std::string shape_distribution_json(const std::string& text, std::size_t m, const std::vector<std::size_t>& n,
                                    const std::string& method, std::size_t samples, std::uint64_t seed,
                                    std::size_t jobs) {
    const A2mTree chi = io::a2m_from_json(json::parse(text));
    if (method != "exact" && method != "mc") throw InvalidArgument("method must be 'exact' or 'mc'");
    const ShapeDistribution d = method == "exact" ? shape_distribution_exact(chi.tree, chi.nu, m, n)
                                                  : shape_distribution_mc(chi.tree, chi.nu, m, n, samples, seed, jobs);
    return io::shape_distribution_to_json(d).dump();
}

py::tuple d_s_json(const std::string& a, const std::string& b, std::size_t m_max, std::size_t budget,
                   std::size_t samples, std::uint64_t seed) {
    ShapeSourceOptions o;
    o.mc_samples = samples;
    o.seed = seed;
    const auto est = d_s_truncated(make_shape_source(io::a2m_from_json(json::parse(a)), o),
                                   make_shape_source(io::a2m_from_json(json::parse(b)), o), m_max, budget);
    return py::make_tuple(est.value, est.tail_bound, est.terms);
}

std::string simulate_json(std::size_t M, const std::vector<std::size_t>& N, double gamma_h, double gamma_p,
                          std::uint64_t seed) {
    return io::history_to_json(simulate(M, N, gamma_h, gamma_p, seed)).dump();
}

std::string history_tree_json(const std::string& text) {
    const EmpiricalTwoLevel e = history_to_tree(io::history_from_json(json::parse(text)));
    json out = io::a2m_to_json(e.chi);
    out["root"] = e.root;
    out["leaves"] = e.leaves;
    return out.dump();
}

std::string restrict_json(const std::string& text, const IndexSet& J) {
    return io::history_to_json(restrict(io::history_from_json(json::parse(text)), J)).dump();
}

std::vector<std::vector<std::pair<int, int>>> enumerate_diagonals(int n) {
    std::vector<std::vector<std::pair<int, int>>> out;
    for (const auto& t : enumerate_triangulations(n)) out.push_back(t.diagonals);
    return out;
}

py::list validate_triangulation_py(int n, const std::vector<std::pair<int, int>>& diagonals) {
    py::list out;
    for (const auto& v : validate_triangulation(Triangulation::with_unit_arcs(n, diagonals)).violations)
        out.append(py::make_tuple(v.rule, v.args, v.detail));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "C++ core of a2mtree";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<EnumerationTooLarge>(m, "EnumerationTooLarge", PyExc_ValueError);
    py::register_exception<SampleOnBranchPoint>(m, "SampleOnBranchPoint", PyExc_ValueError);
    py::register_exception<DegenerateArc>(m, "DegenerateArc", PyExc_ValueError);
    py::register_exception<UnknownVertex>(m, "UnknownVertex", PyExc_KeyError);

    py::class_<AlgebraicTree>(m, "AlgebraicTree")
        .def(py::init<std::vector<Vertex>, const std::vector<Edge>&>(), py::arg("vertices"), py::arg("edges"))
        .def("__len__", &AlgebraicTree::size)
        .def_property_readonly("vertices", &AlgebraicTree::vertices)
        .def("edges", &AlgebraicTree::edges)
        .def("degree", &AlgebraicTree::degree)
        .def("is_binary", &AlgebraicTree::is_binary)
        .def("branch_point", &AlgebraicTree::branch_point, py::arg("x"), py::arg("y"), py::arg("z"))
        .def("interval", [](const AlgebraicTree& t, Vertex x, Vertex y) { return interval(t, x, y); })
        .def("component", [](const AlgebraicTree& t, Vertex x, Vertex y) { return component(t, x, y); })
        .def("axiom_violations", [](const AlgebraicTree& t) {
            return validate_branch_point_map(t.vertices(), branch_point_table(t)).violations.size();
        })
        .def("shape_code",
             [](const AlgebraicTree& t, const SampleMatrix& samples, std::optional<Vertex> root) {
                 return canonical_code(shape(t, samples, root));
             },
             py::arg("samples"), py::arg("root") = py::none());

    m.def("_decode", &decode_json);
    m.def("_encode", &encode_json, py::arg("a2m"), py::arg("root") = py::none(), py::arg("flips") = std::vector<Vertex>{});
    m.def("_branch_point_distribution", &xi_json);
    m.def("_shape_distribution", &shape_distribution_json, py::arg("a2m"), py::arg("m"), py::arg("n"),
          py::arg("method") = "exact", py::arg("samples") = 10000, py::arg("seed") = 0, py::arg("jobs") = 1);
    m.def("_d_s", &d_s_json, py::arg("a"), py::arg("b"), py::arg("m_max") = 2, py::arg("budget") = 10,
          py::arg("samples") = 10000, py::arg("seed") = 0);
    m.def("_simulate", &simulate_json, py::arg("M"), py::arg("N"), py::arg("gamma_h") = 1.0,
          py::arg("gamma_p") = 1.0, py::arg("seed") = 0);
    m.def("_history_to_tree", &history_tree_json);
    m.def("_restrict", &restrict_json);
    m.def("enumerate_triangulations", &enumerate_diagonals, py::arg("n"));
    m.def("validate_triangulation", &validate_triangulation_py, py::arg("n"), py::arg("diagonals"));
    m.def("hausdorff_distance", &hausdorff_distance, py::arg("a"), py::arg("b"));
}
