#pragma once

// External network descriptions: the JSON graph document, MATPOWER case
// files (bus and branch blocks only) and series R/RC impedance networks.
// Parsers report malformed input as ParseError; conversions report
// physically meaningless data (zero-impedance branches) as ContractError.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lapflow/netmodel.hpp"

namespace lapflow {

inline constexpr std::string_view kGraphSchema = "lapflow-graph/1";
inline constexpr std::string_view kImpedanceSchema = "lapflow-impedance/1";

/// Strict GraphDocument parse:
///   {"schema": "lapflow-graph/1" (optional), "n": int, "directed": bool,
///    "edges": [{"from": int, "to": int, "re": num, "im": num}], "labels": [str] (optional)}
/// Unknown keys are rejected. `im` may be omitted and defaults to 0.
ComplexGraph parse_graph_json(std::string_view text);

/// Inverse of parse_graph_json. Undirected edges are written once, with from < to.
std::string serialize_graph_json(const ComplexGraph& g);

struct MatpowerBus {
    long long bus_id = 0;
    int bus_type = 0;
    /// Shunt conductance / susceptance in MW / MVAr at 1 p.u. (columns 5-6, 0 when absent).
    double gs = 0.0;
    double bs = 0.0;
};

struct MatpowerBranch {
    long long from_bus = 0;
    long long to_bus = 0;
    double r = 0.0;  ///< p.u.
    double x = 0.0;  ///< p.u.
    double b = 0.0;  ///< total line charging, p.u.
    bool in_service = true;
    std::size_t line = 0;
};

struct MatpowerCase {
    double base_mva = 100.0;
    std::vector<MatpowerBus> buses;
    std::vector<MatpowerBranch> branches;
};

/// Reads mpc.baseMVA, mpc.bus and mpc.branch. Bus columns 1-2 (and 5-6 when
/// present) and branch columns 1-5 and 11 are used; other columns are
/// parsed and ignored. Errors carry the offending line number.
MatpowerCase parse_matpower(std::string_view text);

/// Undirected admittance graph: edge weight 1/(r + jx) per in-service
/// branch, parallel branches summed. Line charging, taps and shunts are left
/// out so the Laplacian keeps zero row sums. Nodes follow bus-block order.
ComplexGraph matpower_to_graph(const MatpowerCase& mpc);

/// Full nodal admittance matrix for inspection: the Laplacian plus branch
/// charging (jb/2 at each end) and bus shunts (Gs + jBs)/baseMVA.
/// Transformer taps and phase shifts are ignored.
ComplexMatrix matpower_ybus(const MatpowerCase& mpc);

struct ImpedanceBranch {
    Index from = 0;
    Index to = 0;
    double resistance = 0.0;                 ///< ohms
    std::optional<double> capacitance;       ///< farads, series with the resistance
};

struct ImpedanceSpec {
    Index n = 0;
    std::vector<ImpedanceBranch> branches;
    double shunt_inductance = 0.0;  ///< henries, uniform at every node
    double omega = 0.0;             ///< rad/s; required when any branch has a capacitance
    std::vector<std::string> labels;
};

/// {"schema": "lapflow-impedance/1", "n": int, "shunt_inductance": num,
///  "omega": num (optional), "branches": [{"from", "to", "resistance", "capacitance" (optional)}],
///  "labels": [str] (optional)}
ImpedanceSpec parse_impedance_json(std::string_view text);

struct ImpedanceNetwork {
    ComplexGraph graph;
    double shunt_inductance = 0.0;
};

/// Edge weight 1/(R + 1/(j omega C)) per branch (1/R without capacitance),
/// parallel branches summed. Throws ContractError on invariant violations
/// and zero total branch impedance.
ImpedanceNetwork impedance_to_graph(const ImpedanceSpec& spec);

enum class InputFormat { Json, Matpower };

/// A network ready for analysis together with what the source format knows
/// about physical units.
struct NetworkInput {
    ComplexGraph graph;
    std::optional<double> shunt_inductance;
    /// "dimensionless", "p.u. admittance" or "siemens".
    std::string weight_units;
};

/// JSON input is dispatched on its "schema" field: the impedance schema
/// yields an impedance network, anything else is read as a graph document.
NetworkInput load_network(std::string_view text, InputFormat format);

}  // namespace lapflow
