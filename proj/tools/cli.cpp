#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lapflow/flows.hpp"
#include "lapflow/report.hpp"

namespace lapflow::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

InputFormat resolve_format(const std::string& requested, const std::string& path) {
    if (requested == "json") return InputFormat::Json;
    if (requested == "matpower") return InputFormat::Matpower;
    return path.size() > 2 && path.ends_with(".m") ? InputFormat::Matpower : InputFormat::Json;
}

NetworkInput load(const std::string& path, const std::string& format) {
    return load_network(read_file(path), resolve_format(format, path));
}

/// Opens `path` for writing, or returns `fallback` for "-".
struct Sink {
    std::ofstream file;
    std::ostream* stream;

    Sink(const std::string& path, std::ostream& fallback) : stream(&fallback) {
        if (path == "-") return;
        file.open(path, std::ios::binary);
        if (!file) throw Error("cannot write " + path);
        stream = &file;
    }
};

ComplexVector parse_x0(const std::string& spec, Index n, std::uint64_t seed) {
    if (spec == "uniform-random") {
        // Entries uniform on the unit square [0,1) x [0,1)i; 53-bit draws keep
        // the stream identical across standard libraries.
        std::mt19937_64 rng(seed);
        const auto draw = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        ComplexVector x(n);
        for (Index i = 0; i < n; ++i) {
            const double re = draw();
            x(i) = Complex(re, draw());
        }
        return x;
    }
    if (spec.starts_with("basis:")) {
        long long k = -1;
        try {
            k = std::stoll(spec.substr(6));
        } catch (const std::exception&) {
        }
        if (k < 0 || k >= n) throw ContractError("--x0 " + spec + ": basis index must be in [0, " + std::to_string(n) + ")");
        ComplexVector x = ComplexVector::Zero(n);
        x(k) = 1.0;
        return x;
    }
    // One entry per line: "re" or "re,im"; '#' starts a comment.
    const std::string path = spec.starts_with("file:") ? spec.substr(5) : spec;
    std::istringstream in(read_file(path));
    std::vector<Complex> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream fields(line);
        double re = 0.0, im = 0.0;
        if (!(fields >> re)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw ParseError("x0 file " + path + ": expected a number", line_no);
        }
        if (!(fields >> im)) im = 0.0;
        values.emplace_back(re, im);
    }
    if (static_cast<Index>(values.size()) != n)
        throw ParseError("x0 file " + path + " has " + std::to_string(values.size()) + " entries, graph has " +
                         std::to_string(n));
    return Eigen::Map<ComplexVector>(values.data(), n);
}

/// 20 / gap for a stable generator. For an unstable one the horizon is long
/// enough (40 / growth rate) for the state to cross the divergence limit.
double default_horizon(const std::vector<Complex>& generator_negated_spectrum) {
    const double gap = spectral_gap(generator_negated_spectrum);
    if (gap > 0.0) return 20.0 / gap;
    if (gap < 0.0) return 40.0 / -gap;
    return 20.0;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(Complex z) { return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i"; }

struct AnalyzeArgs {
    std::string input, format = "auto", out = "text";
};

struct SimulateArgs {
    std::string input, format = "auto", flow = "laplacian", x0 = "uniform-random", out = "-", method = "exact";
    std::optional<double> t_max;
    long long samples = 201;
    std::uint64_t seed = 0;
    double tol = kConsensusTol;
};

struct ExpmArgs {
    std::string input, format = "auto", which = "L", part = "re", out = "-";
    double t = 1.0;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
    const auto input = load(a.input, a.format);
    const auto report = build_report(input);
    out << (a.out == "json" ? report_to_json(report) : report_to_text(report));
    return kOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    const auto input = load(a.input, a.format);
    if (a.flow == "impedance" && !input.shunt_inductance)
        throw ParseError("impedance flow needs a shunt inductance; use a " + std::string(kImpedanceSchema) + " document");
    if (a.samples < 2) throw ContractError("--samples must be at least 2");

    const LaplacianBundle b = analyze(input.graph);
    ComplexMatrix generator;
    std::string label;
    double unit_scale = 1.0;
    if (a.flow == "laplacian") {
        generator = -b.L;
        label = "dx/dt = -L x";
    } else {
        unit_scale = a.flow == "impedance" ? *input.shunt_inductance : 1.0;
        generator = -b.L_pinv / unit_scale;
        label = a.flow == "impedance" ? "dI/dt = -(1/L_ind) L^+ I, L_ind = " + fmt(unit_scale) + " H"
                                      : "dx/dt = -L^+ x";
    }
    std::vector<Complex> negated = eig(-generator).eigenvalues;
    const double t_max = a.t_max.value_or(default_horizon(negated));
    if (!(t_max > 0.0)) throw ContractError("--t-max must be positive");

    FlowSpec spec{generator, parse_x0(a.x0, input.graph.size(), a.seed), uniform_grid(t_max, a.samples),
                  a.method == "rk4" ? FlowMethod::Rk4Crosscheck : FlowMethod::ExactExpm};
    const Trajectory traj = simulate(spec);
    const ConsensusReport cons = detect_consensus(traj, a.tol);

    const std::string time_unit = a.flow == "impedance" ? "s" : "dimensionless";
    const std::string state_unit = a.flow == "impedance" ? "A" : "dimensionless";
    {
        Sink sink(a.out, out);
        write_trajectory_csv(*sink.stream, traj,
                             {"lapflow trajectory: " + label,
                              "time unit: " + time_unit + "; state unit: " + state_unit + "; edge weights: " +
                                  input.weight_units});
    }
    std::ostream& rep = a.out == "-" ? err : out;
    rep << "flow          " << a.flow << "\n";
    rep << "achieved      " << (cons.achieved ? "yes" : "no") << "\n";
    rep << "diverged      " << (cons.diverged ? "yes" : "no") << "\n";
    if (cons.achieved) {
        rep << "consensus     " << fmt(cons.consensus_value) << "\n";
        rep << "settling_time " << fmt(cons.settling_time) << "\n";
    }
    rep << "spread_final  " << fmt(cons.spread_final) << "\n";
    if (!cons.achieved && cons.final_state.size() > 0) {
        rep << "final_state  ";
        for (Index i = 0; i < cons.final_state.size(); ++i) rep << ' ' << fmt(cons.final_state(i));
        rep << "\n";
    }
    return kOk;
}

int cmd_expm_dump(const ExpmArgs& a, std::ostream& out) {
    if (!(a.t >= 0.0)) throw ContractError("--t must be non-negative");
    const auto input = load(a.input, a.format);
    const LaplacianBundle b = analyze(input.graph);
    const ComplexMatrix& m = a.which == "pinv" ? b.L_pinv : b.L;
    const ComplexMatrix e = expm(-m * a.t);
    Sink sink(a.out, out);
    std::ostream& os = *sink.stream;
    os << "# " << (a.part == "im" ? "Im" : "Re") << "(expm(-" << (a.which == "pinv" ? "L^+" : "L") << " t)), t = "
       << fmt(a.t) << ", n = " << e.rows() << ", row-major\n";
    for (Index i = 0; i < e.rows(); ++i) {
        for (Index j = 0; j < e.cols(); ++j) {
            if (j) os << ',';
            os << fmt(a.part == "im" ? e(i, j).imag() : e(i, j).real());
        }
        os << '\n';
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Complex-valued graph Laplacians, pseudoinverse flows and rEEP certificates", "lapflow"};
    app.require_subcommand(1);

    const std::vector<std::string> formats{"auto", "json", "matpower"};

    AnalyzeArgs an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Structure, spectra, rEEP certificates and equivalence audit");
    analyze_cmd->add_option("input", an.input, "Graph JSON, impedance JSON or MATPOWER case file")->required();
    analyze_cmd->add_option("--format", an.format, "Input format (auto: .m means MATPOWER)")
        ->check(CLI::IsMember(formats));
    analyze_cmd->add_option("--out", an.out, "Report format")->check(CLI::IsMember({"text", "json"}));

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a Laplacian, pseudoinverse or impedance flow");
    simulate_cmd->add_option("input", sim.input, "Network file")->required();
    simulate_cmd->add_option("--format", sim.format, "Input format")->check(CLI::IsMember(formats));
    simulate_cmd->add_option("--flow", sim.flow, "Flow generator")
        ->check(CLI::IsMember({"laplacian", "pinv", "impedance"}));
    simulate_cmd->add_option("--x0", sim.x0, "Initial state: uniform-random, basis:k, or a file (file:PATH)");
    simulate_cmd->add_option("--t-max", sim.t_max, "Horizon (default 20/spectral gap of the generator)");
    simulate_cmd->add_option("--samples", sim.samples, "Number of uniform samples including t = 0");
    simulate_cmd->add_option("--seed", sim.seed, "Seed for --x0 uniform-random");
    simulate_cmd->add_option("--out", sim.out, "Trajectory CSV path ('-' for stdout)");
    simulate_cmd->add_option("--method", sim.method, "Propagation method")->check(CLI::IsMember({"exact", "rk4"}));
    simulate_cmd->add_option("--tol", sim.tol, "Consensus tolerance on the state spread");

    ExpmArgs ex;
    auto* expm_cmd = app.add_subcommand("expm-dump", "Write Re or Im of expm(-L t) or expm(-L^+ t) as CSV");
    expm_cmd->add_option("input", ex.input, "Network file")->required();
    expm_cmd->add_option("--format", ex.format, "Input format")->check(CLI::IsMember(formats));
    expm_cmd->add_option("--which", ex.which, "Matrix")->check(CLI::IsMember({"L", "pinv"}));
    expm_cmd->add_option("--t", ex.t, "Time");
    expm_cmd->add_option("--part", ex.part, "Real or imaginary part")->check(CLI::IsMember({"re", "im"}));
    expm_cmd->add_option("--out", ex.out, "CSV path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(an, out);
        if (*simulate_cmd) return cmd_simulate(sim, out, err);
        return cmd_expm_dump(ex, out);
    } catch (const ParseError& e) {
        err << "lapflow: " << e.what() << "\n";
        return kParseError;
    } catch (const Error& e) {
        err << "lapflow: " << e.what() << "\n";
        return kAnalysisError;
    }
}

}  // namespace lapflow::cli
