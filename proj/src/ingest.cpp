#include "lapflow/ingest.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <map>
#include <set>
#include <unordered_map>

#include "json.hpp"

namespace lapflow {

namespace {

using nlohmann::json;

// Dense storage; anything larger is almost certainly a malformed document.
constexpr long long kMaxNodes = 20000;

// ---------------------------------------------------------------- JSON helpers

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

json parse_json_text(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), line_of(text, e.byte));
    }
}

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError(std::string(where) + ": unknown field \"" + key + "\"");
    }
}

const json& field(const json& obj, std::string_view where, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
    return *it;
}

long long integer(const json& v, const std::string& where) {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
    }
    throw ParseError(where + ": expected an integer");
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where + ": expected a number");
    return v.get<double>();
}

std::vector<std::string> labels_of(const json& doc, long long n) {
    std::vector<std::string> labels;
    const auto it = doc.find("labels");
    if (it == doc.end()) return labels;
    if (!it->is_array()) throw ParseError("labels: expected an array of strings");
    for (std::size_t i = 0; i < it->size(); ++i) {
        if (!(*it)[i].is_string()) throw ParseError("labels[" + std::to_string(i) + "]: expected a string");
        labels.push_back((*it)[i].get<std::string>());
    }
    if (static_cast<long long>(labels.size()) != n)
        throw ParseError("labels: expected " + std::to_string(n) + " entries, got " + std::to_string(labels.size()));
    return labels;
}

void check_schema(const json& doc, std::string_view expected) {
    const auto it = doc.find("schema");
    if (it == doc.end()) return;
    if (!it->is_string() || it->get<std::string>() != expected)
        throw ParseError("schema: expected \"" + std::string(expected) + "\"");
}

// ---------------------------------------------------------- MATPOWER scanner

struct Row {
    std::vector<double> values;
    std::size_t line = 0;
};

double parse_token(std::string_view token, std::size_t line) {
    const std::string buf(token);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str() || *end != '\0')
        throw ParseError("non-numeric token \"" + buf + "\"", line);
    if (errno == ERANGE && std::isinf(v)) throw ParseError("number out of range \"" + buf + "\"", line);
    return v;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

struct Scan {
    std::optional<double> base_mva;
    std::optional<std::vector<Row>> bus;
    std::optional<std::vector<Row>> branch;
};

Scan scan_matpower(std::string_view text) {
    Scan scan;
    std::vector<Row>* block = nullptr;
    Row row;
    std::string token;

    const auto flush_token = [&](std::size_t line) {
        if (token.empty()) return;
        if (row.values.empty()) row.line = line;
        row.values.push_back(parse_token(token, line));
        token.clear();
    };
    const auto flush_row = [&]() {
        if (!row.values.empty()) block->push_back(std::move(row));
        row = Row{};
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto pct = line.find('%'); pct != std::string_view::npos) line = line.substr(0, pct);

        if (!block) {
            const auto t = trim(line);
            if (t.substr(0, 4) != "mpc.") continue;
            const auto eq = t.find('=');
            if (eq == std::string_view::npos) continue;
            const auto name = trim(t.substr(4, eq - 4));
            auto rhs = trim(t.substr(eq + 1));
            if (name == "baseMVA") {
                if (!rhs.empty() && rhs.back() == ';') rhs.remove_suffix(1);
                if (scan.base_mva) throw ParseError("mpc.baseMVA assigned twice", line_no);
                scan.base_mva = parse_token(trim(rhs), line_no);
                continue;
            }
            std::optional<std::vector<Row>>* target = name == "bus" ? &scan.bus : name == "branch" ? &scan.branch : nullptr;
            if (!target) continue;
            if (*target) throw ParseError("mpc." + std::string(name) + " assigned twice", line_no);
            if (rhs.empty() || rhs.front() != '[')
                throw ParseError("mpc." + std::string(name) + " must be a matrix literal", line_no);
            target->emplace();
            block = &**target;
            line = rhs.substr(1);
        }

        for (std::size_t i = 0; i < line.size() && block; ++i) {
            const char c = line[i];
            if (c == ']') {
                flush_token(line_no);
                flush_row();
                block = nullptr;
                const auto rest = trim(line.substr(i + 1));
                if (!rest.empty() && rest != ";" && rest != "';" && rest.front() != '\'')
                    throw ParseError("unexpected text after matrix block", line_no);
            } else if (c == ';') {
                flush_token(line_no);
                flush_row();
            } else if (is_space(c) || c == ',') {
                flush_token(line_no);
            } else {
                token.push_back(c);
            }
        }
        if (block) {
            flush_token(line_no);
            flush_row();
        }
    }
    if (block) throw ParseError("matrix block not closed with ']'", line_no);
    return scan;
}

long long bus_number(double v, std::size_t line) {
    if (!std::isfinite(v) || std::floor(v) != v || std::abs(v) > 9e15)
        throw ParseError("bus number must be an integer", line);
    return static_cast<long long>(v);
}

// ------------------------------------------------------------- admittances

Complex branch_admittance(const MatpowerBranch& br) {
    const Complex z(br.r, br.x);
    if (z == Complex(0.0, 0.0))
        throw ContractError("matpower_to_graph: zero-impedance branch " + std::to_string(br.from_bus) + "-" +
                            std::to_string(br.to_bus) + " (line " + std::to_string(br.line) + ")");
    return 1.0 / z;
}

ComplexGraph graph_from_pairs(Index n, const std::map<std::pair<Index, Index>, Complex>& sums,
                              std::vector<std::string> labels) {
    std::vector<Edge> edges;
    for (const auto& [key, w] : sums)
        if (w != Complex(0.0, 0.0)) edges.push_back({key.first, key.second, w});
    return build_graph(n, false, std::move(edges), std::move(labels));
}

}  // namespace

ComplexGraph parse_graph_json(std::string_view text) {
    const json doc = parse_json_text(text);
    if (!doc.is_object()) throw ParseError("graph document must be a JSON object");
    reject_unknown(doc, "graph", {"schema", "n", "directed", "edges", "labels"});
    check_schema(doc, kGraphSchema);

    const long long n = integer(field(doc, "graph", "n"), "n");
    if (n < 1 || n > kMaxNodes) throw ParseError("n: must be between 1 and " + std::to_string(kMaxNodes));
    const json& directed = field(doc, "graph", "directed");
    if (!directed.is_boolean()) throw ParseError("directed: expected a boolean");
    const json& edges = field(doc, "graph", "edges");
    if (!edges.is_array()) throw ParseError("edges: expected an array");

    std::vector<Edge> list;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string where = "edges[" + std::to_string(k) + "]";
        const json& e = edges[k];
        if (!e.is_object()) throw ParseError(where + ": expected an object");
        reject_unknown(e, where, {"from", "to", "re", "im"});
        const long long from = integer(field(e, where, "from"), where + ".from");
        const long long to = integer(field(e, where, "to"), where + ".to");
        const double re = number(field(e, where, "re"), where + ".re");
        const double im = e.contains("im") ? number(e["im"], where + ".im") : 0.0;
        list.push_back({static_cast<Index>(from), static_cast<Index>(to), Complex(re, im)});
    }
    auto labels = labels_of(doc, n);
    try {
        return build_graph(static_cast<Index>(n), directed.get<bool>(), std::move(list), std::move(labels));
    } catch (const ContractError& e) {
        throw ParseError(e.what());
    }
}

std::string serialize_graph_json(const ComplexGraph& g) {
    json doc;
    doc["schema"] = kGraphSchema;
    doc["n"] = g.size();
    doc["directed"] = g.directed();
    doc["edges"] = json::array();
    for (const auto& e : g.edges()) {
        if (!g.directed() && e.from > e.to) continue;
        doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"re", e.weight.real()}, {"im", e.weight.imag()}});
    }
    if (!g.labels().empty()) doc["labels"] = g.labels();
    return doc.dump(2) + "\n";
}

MatpowerCase parse_matpower(std::string_view text) {
    const Scan scan = scan_matpower(text);
    if (!scan.base_mva) throw ParseError("missing mpc.baseMVA");
    if (!scan.bus) throw ParseError("missing mpc.bus block");
    if (!scan.branch) throw ParseError("missing mpc.branch block");

    MatpowerCase mpc;
    mpc.base_mva = *scan.base_mva;
    if (!(mpc.base_mva > 0.0) || !std::isfinite(mpc.base_mva)) throw ParseError("mpc.baseMVA must be positive");

    std::set<long long> ids;
    for (const auto& row : *scan.bus) {
        if (row.values.size() < 2)
            throw ParseError("bus row has " + std::to_string(row.values.size()) + " columns, need at least 2", row.line);
        MatpowerBus bus;
        bus.bus_id = bus_number(row.values[0], row.line);
        const double type = row.values[1];
        if (!std::isfinite(type) || std::floor(type) != type || std::abs(type) > 1e6)
            throw ParseError("bus type must be an integer", row.line);
        bus.bus_type = static_cast<int>(type);
        if (row.values.size() >= 6) {
            bus.gs = row.values[4];
            bus.bs = row.values[5];
            if (!std::isfinite(bus.gs) || !std::isfinite(bus.bs)) throw ParseError("bus shunt must be finite", row.line);
        }
        if (!ids.insert(bus.bus_id).second)
            throw ParseError("duplicate bus number " + std::to_string(bus.bus_id), row.line);
        mpc.buses.push_back(bus);
    }
    if (mpc.buses.empty()) throw ParseError("mpc.bus block is empty");
    if (static_cast<long long>(mpc.buses.size()) > kMaxNodes) throw ParseError("too many buses");

    for (const auto& row : *scan.branch) {
        if (row.values.size() < 11)
            throw ParseError("branch row has " + std::to_string(row.values.size()) + " columns, need at least 11",
                             row.line);
        MatpowerBranch br;
        br.from_bus = bus_number(row.values[0], row.line);
        br.to_bus = bus_number(row.values[1], row.line);
        br.r = row.values[2];
        br.x = row.values[3];
        br.b = row.values[4];
        br.in_service = row.values[10] != 0.0;
        br.line = row.line;
        for (long long end : {br.from_bus, br.to_bus})
            if (!ids.contains(end)) throw ParseError("branch refers to unknown bus " + std::to_string(end), row.line);
        if (!std::isfinite(br.r) || !std::isfinite(br.x) || !std::isfinite(br.b))
            throw ParseError("branch parameters must be finite", row.line);
        mpc.branches.push_back(br);
    }
    return mpc;
}

namespace {

std::unordered_map<long long, Index> bus_index(const MatpowerCase& mpc) {
    std::unordered_map<long long, Index> index;
    for (std::size_t i = 0; i < mpc.buses.size(); ++i) index.emplace(mpc.buses[i].bus_id, static_cast<Index>(i));
    return index;
}

}  // namespace

ComplexGraph matpower_to_graph(const MatpowerCase& mpc) {
    const auto index = bus_index(mpc);
    std::map<std::pair<Index, Index>, Complex> sums;
    for (const auto& br : mpc.branches) {
        if (!br.in_service) continue;
        const Index a = index.at(br.from_bus), b = index.at(br.to_bus);
        if (a == b)
            throw ContractError("matpower_to_graph: branch at line " + std::to_string(br.line) + " connects bus " +
                                std::to_string(br.from_bus) + " to itself");
        sums[{std::min(a, b), std::max(a, b)}] += branch_admittance(br);
    }
    std::vector<std::string> labels;
    for (const auto& bus : mpc.buses) labels.push_back("bus " + std::to_string(bus.bus_id));
    return graph_from_pairs(static_cast<Index>(mpc.buses.size()), sums, std::move(labels));
}

ComplexMatrix matpower_ybus(const MatpowerCase& mpc) {
    const auto index = bus_index(mpc);
    const auto n = static_cast<Index>(mpc.buses.size());
    ComplexMatrix y = ComplexMatrix::Zero(n, n);
    for (const auto& br : mpc.branches) {
        if (!br.in_service) continue;
        const Index a = index.at(br.from_bus), b = index.at(br.to_bus);
        const Complex ys = branch_admittance(br);
        const Complex charging(0.0, br.b / 2.0);
        y(a, a) += ys + charging;
        y(b, b) += ys + charging;
        y(a, b) -= ys;
        y(b, a) -= ys;
    }
    for (Index i = 0; i < n; ++i) {
        const auto& bus = mpc.buses[static_cast<std::size_t>(i)];
        y(i, i) += Complex(bus.gs, bus.bs) / mpc.base_mva;
    }
    return y;
}

ImpedanceSpec parse_impedance_json(std::string_view text) {
    const json doc = parse_json_text(text);
    if (!doc.is_object()) throw ParseError("impedance document must be a JSON object");
    reject_unknown(doc, "impedance", {"schema", "n", "shunt_inductance", "omega", "branches", "labels"});
    check_schema(doc, kImpedanceSchema);

    ImpedanceSpec spec;
    const long long n = integer(field(doc, "impedance", "n"), "n");
    if (n < 1 || n > kMaxNodes) throw ParseError("n: must be between 1 and " + std::to_string(kMaxNodes));
    spec.n = static_cast<Index>(n);
    spec.shunt_inductance = number(field(doc, "impedance", "shunt_inductance"), "shunt_inductance");
    if (doc.contains("omega")) spec.omega = number(doc["omega"], "omega");
    const json& branches = field(doc, "impedance", "branches");
    if (!branches.is_array()) throw ParseError("branches: expected an array");
    for (std::size_t k = 0; k < branches.size(); ++k) {
        const std::string where = "branches[" + std::to_string(k) + "]";
        const json& b = branches[k];
        if (!b.is_object()) throw ParseError(where + ": expected an object");
        reject_unknown(b, where, {"from", "to", "resistance", "capacitance"});
        ImpedanceBranch br;
        br.from = static_cast<Index>(integer(field(b, where, "from"), where + ".from"));
        br.to = static_cast<Index>(integer(field(b, where, "to"), where + ".to"));
        br.resistance = number(field(b, where, "resistance"), where + ".resistance");
        if (b.contains("capacitance")) br.capacitance = number(b["capacitance"], where + ".capacitance");
        spec.branches.push_back(br);
    }
    spec.labels = labels_of(doc, n);
    return spec;
}

ImpedanceNetwork impedance_to_graph(const ImpedanceSpec& spec) {
    if (!(spec.shunt_inductance > 0.0)) throw ContractError("impedance_to_graph: shunt_inductance must be positive");
    const bool any_c = std::any_of(spec.branches.begin(), spec.branches.end(),
                                   [](const ImpedanceBranch& b) { return b.capacitance.has_value(); });
    if (any_c && !(spec.omega > 0.0)) throw ContractError("impedance_to_graph: omega must be positive with capacitors");

    std::map<std::pair<Index, Index>, Complex> sums;
    for (std::size_t k = 0; k < spec.branches.size(); ++k) {
        const auto& br = spec.branches[k];
        const std::string where = "impedance_to_graph: branch " + std::to_string(k);
        if (!(br.resistance >= 0.0)) throw ContractError(where + " has negative resistance");
        if (br.capacitance && !(*br.capacitance > 0.0)) throw ContractError(where + " has non-positive capacitance");
        if (br.from < 0 || br.from >= spec.n || br.to < 0 || br.to >= spec.n)
            throw ContractError(where + " has a node index out of range");
        if (br.from == br.to) throw ContractError(where + " is a self-loop");
        Complex z(br.resistance, 0.0);
        if (br.capacitance) z += 1.0 / Complex(0.0, spec.omega * *br.capacitance);
        if (z == Complex(0.0, 0.0)) throw ContractError(where + " has zero impedance");
        sums[{std::min(br.from, br.to), std::max(br.from, br.to)}] += 1.0 / z;
    }
    return {graph_from_pairs(spec.n, sums, spec.labels), spec.shunt_inductance};
}

NetworkInput load_network(std::string_view text, InputFormat format) {
    // Conversion failures here come from the file's contents, so they are
    // reported as parse errors.
    try {
        if (format == InputFormat::Matpower)
            return {matpower_to_graph(parse_matpower(text)), std::nullopt, "p.u. admittance"};

        const json doc = parse_json_text(text);
        const bool impedance = doc.is_object() && doc.contains("schema") && doc["schema"].is_string() &&
                               doc["schema"].get<std::string>() == kImpedanceSchema;
        if (!impedance) return {parse_graph_json(text), std::nullopt, "dimensionless"};
        auto net = impedance_to_graph(parse_impedance_json(text));
        return {std::move(net.graph), net.shunt_inductance, "siemens"};
    } catch (const ContractError& e) {
        throw ParseError(e.what());
    }
}

}  // namespace lapflow
