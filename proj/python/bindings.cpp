#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "lapflow/errors.hpp"
#include "lapflow/flows.hpp"
#include "lapflow/ingest.hpp"
#include "lapflow/reep.hpp"
#include "lapflow/report.hpp"

namespace py = pybind11;
using namespace lapflow;

namespace {

InputFormat format_of(const std::string& format, const std::string& path) {
    if (format == "json") return InputFormat::Json;
    if (format == "matpower") return InputFormat::Matpower;
    if (format != "auto") throw ContractError("format must be auto, json or matpower");
    return path.size() >= 2 && path.compare(path.size() - 2, 2, ".m") == 0 ? InputFormat::Matpower
                                                                            : InputFormat::Json;
}

NetworkInput load_file(const std::string& path, const std::string& format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_network(ss.str(), format_of(format, path));
}

PinvRoute route_of(const std::string& route) {
    if (route == "general") return PinvRoute::General;
    if (route == "projector") return PinvRoute::Projector;
    throw ContractError("route must be general or projector");
}

SamplingOptions sampling_options(std::optional<double> t_max, Index samples, double eps_pos) {
    SamplingOptions opts;
    opts.t_max = t_max;
    opts.samples = samples;
    opts.eps_pos = eps_pos;
    return opts;
}

NetworkInput as_input(const ComplexGraph& g) { return {g, std::nullopt, "dimensionless"}; }

}  // namespace

PYBIND11_MODULE(_lapflow, m) {
    m.doc() = "Complex-weighted graph Laplacians, eventual positivity certificates and consensus flows.";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ContractError>(m, "ContractError", error.ptr());
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
    py::register_exception<SaturationError>(m, "SaturationError", numerical.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());

    py::enum_<GraphClass>(m, "GraphClass")
        .value("UnsignedUndirected", GraphClass::UnsignedUndirected)
        .value("SignedUndirected", GraphClass::SignedUndirected)
        .value("UnsignedDigraph", GraphClass::UnsignedDigraph)
        .value("SignedDigraph", GraphClass::SignedDigraph);

    py::class_<ComplexGraph>(m, "Graph")
        .def(py::init([](Index n, bool directed, const std::vector<std::tuple<Index, Index, Complex>>& edges,
                         std::vector<std::string> labels) {
                 std::vector<Edge> list;
                 for (const auto& [from, to, w] : edges) list.push_back({from, to, w});
                 return build_graph(n, directed, std::move(list), std::move(labels));
             }),
             py::arg("n"), py::arg("directed"), py::arg("edges"), py::arg("labels") = std::vector<std::string>{})
        .def_property_readonly("n", &ComplexGraph::size)
        .def_property_readonly("directed", &ComplexGraph::directed)
        .def_property_readonly("labels", &ComplexGraph::labels)
        .def_property_readonly("edges",
                               [](const ComplexGraph& g) {
                                   std::vector<std::tuple<Index, Index, Complex>> out;
                                   for (const auto& e : g.edges()) out.emplace_back(e.from, e.to, e.weight);
                                   return out;
                               })
        .def("__eq__", [](const ComplexGraph& a, const ComplexGraph& b) { return a == b; })
        .def("__repr__", [](const ComplexGraph& g) {
            return "<Graph n=" + std::to_string(g.size()) + (g.directed() ? " directed" : " undirected") +
                   " edges=" + std::to_string(g.edges().size()) + ">";
        });

    py::class_<StructureReport>(m, "StructureReport")
        .def_readonly("graph_class", &StructureReport::graph_class)
        .def_readonly("directed", &StructureReport::directed)
        .def_readonly("connected", &StructureReport::connected)
        .def_readonly("weight_balanced", &StructureReport::weight_balanced)
        .def_readonly("component_count", &StructureReport::component_count);

    py::class_<NetworkInput>(m, "Network")
        .def_readonly("graph", &NetworkInput::graph)
        .def_readonly("shunt_inductance", &NetworkInput::shunt_inductance)
        .def_readonly("weight_units", &NetworkInput::weight_units);

    m.def("parse_graph_json", &parse_graph_json, py::arg("text"));
    m.def("serialize_graph_json", &serialize_graph_json, py::arg("graph"));
    m.def(
        "load_network",
        [](const std::string& text, const std::string& format) { return load_network(text, format_of(format, "")); },
        py::arg("text"), py::arg("format") = "json");
    m.def("load_file", &load_file, py::arg("path"), py::arg("format") = "auto");

    m.def("classify", &classify, py::arg("graph"));
    m.def("laplacian", &laplacian, py::arg("graph"));
    m.def(
        "laplacian_pinv",
        [](const ComplexMatrix& l, const std::string& route) { return laplacian_pinv(l, route_of(route)); },
        py::arg("L"), py::arg("route") = "general");
    m.def("corank", &corank, py::arg("M"), py::arg("tol") = kZeroTol);
    m.def(
        "spectrum", [](const ComplexMatrix& mat) { return eig(mat).eigenvalues; }, py::arg("M"));
    m.def(
        "pinv_spectrum_map",
        [](std::vector<Complex> spectrum, double tol) { return pinv_spectrum_map(spectrum, tol); },
        py::arg("spectrum"), py::arg("tol") = kZeroTol);
    m.def(
        "shift_d", [](std::vector<Complex> spectrum, double tol) { return shift_d(spectrum, tol); },
        py::arg("laplacian_spectrum"), py::arg("tol") = kZeroTol);
    m.def("expm", &expm, py::arg("M"));

    py::class_<ReepCertificate>(m, "Certificate")
        .def_property_readonly("verdict", [](const ReepCertificate& c) { return std::string(to_string(c.verdict)); })
        .def_property_readonly("criterion",
                               [](const ReepCertificate& c) { return std::string(to_string(c.criterion)); })
        .def_readonly("shift_d", &ReepCertificate::shift_d)
        .def_readonly("t0_estimate", &ReepCertificate::t0_estimate)
        .def_readonly("witness", &ReepCertificate::witness)
        .def_readonly("rule", &ReepCertificate::rule)
        .def_readonly("diverged", &ReepCertificate::diverged)
        .def("__repr__", [](const ReepCertificate& c) {
            return "<Certificate " + std::string(to_string(c.verdict)) + " via " +
                   std::string(to_string(c.criterion)) + ">";
        });

    m.def(
        "reep_by_sampling",
        [](const ComplexMatrix& mat, std::optional<double> t_max, Index samples, double eps_pos) {
            return reep_by_sampling(mat, sampling_options(t_max, samples, eps_pos));
        },
        py::arg("M"), py::arg("t_max") = py::none(), py::arg("samples") = 64, py::arg("eps_pos") = 1e-12);
    m.def(
        "reep_by_spectrum", [](const ComplexGraph& g) { return reep_by_spectrum(analyze(g)); }, py::arg("graph"));
    m.def("reep_by_shifted_pf", &reep_by_shifted_pf, py::arg("M"));

    m.def(
        "equivalence_audit",
        [](const ComplexGraph& g) {
            const auto audit = equivalence_audit(analyze(g));
            py::dict out;
            out["chain"] = audit.chain;
            out["agreement"] = audit.agreement;
            out["anomaly"] = audit.anomaly;
            py::list clauses;
            for (const auto& c : audit.clauses)
                clauses.append(py::make_tuple(c.name, std::string(to_string(c.value)), c.evidence));
            out["clauses"] = clauses;
            return out;
        },
        py::arg("graph"));

    m.def(
        "report_json",
        [](const ComplexGraph& g) { return report_to_json(build_report(as_input(g))); }, py::arg("graph"));
    m.def(
        "report_json_for",
        [](const NetworkInput& input) { return report_to_json(build_report(input)); }, py::arg("network"));

    m.def("uniform_grid", &uniform_grid, py::arg("t_max"), py::arg("samples"));
    m.def(
        "simulate",
        [](const ComplexMatrix& generator, const ComplexVector& x0, std::vector<double> t_grid,
           const std::string& method) {
            FlowSpec spec{generator, x0, std::move(t_grid),
                          method == "rk4" ? FlowMethod::Rk4Crosscheck : FlowMethod::ExactExpm};
            if (method != "exact" && method != "rk4") throw ContractError("method must be exact or rk4");
            const Trajectory traj = simulate(spec);
            ComplexMatrix states(static_cast<Index>(traj.states.size()), x0.size());
            for (std::size_t k = 0; k < traj.states.size(); ++k)
                states.row(static_cast<Index>(k)) = traj.states[k].transpose();
            return py::make_tuple(traj.times, states, traj.diverged);
        },
        py::arg("generator"), py::arg("x0"), py::arg("t_grid"), py::arg("method") = "exact");
    m.def(
        "consensus",
        [](const std::vector<double>& times, const ComplexMatrix& states, bool diverged, double tol) {
            Trajectory traj;
            traj.times = times;
            traj.diverged = diverged;
            for (Index k = 0; k < states.rows(); ++k) traj.states.push_back(states.row(k).transpose());
            const auto r = detect_consensus(traj, tol);
            py::dict out;
            out["achieved"] = r.achieved;
            out["diverged"] = r.diverged;
            out["value"] = r.consensus_value;
            out["settling_time"] = r.settling_time;
            out["spread_final"] = r.spread_final;
            return out;
        },
        py::arg("times"), py::arg("states"), py::arg("diverged") = false, py::arg("tol") = kConsensusTol);
    m.def(
        "predicted_consensus_value",
        [](const ComplexGraph& g, const ComplexVector& x0) { return predicted_consensus_value(analyze(g), x0); },
        py::arg("graph"), py::arg("x0"));
}
