#include "lapflow/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "lapflow/flows.hpp"

namespace lapflow {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json spectrum_json(const std::vector<Complex>& values) {
    ordered_json out = ordered_json::array();
    for (const auto& v : values) out.push_back(complex_json(v));
    return out;
}

ordered_json certificate_json(const ReepCertificate& c) {
    ordered_json out;
    out["verdict"] = to_string(c.verdict);
    out["criterion"] = to_string(c.criterion);
    out["shift_d"] = c.shift_d ? ordered_json(*c.shift_d) : ordered_json(nullptr);
    out["t0_estimate"] = c.t0_estimate ? ordered_json(*c.t0_estimate) : ordered_json(nullptr);
    out["witness"] = c.witness;
    out["rule"] = c.rule;
    out["diverged"] = c.diverged;
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string num(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
    return buf;
}

}  // namespace

AnalysisReport build_report(const NetworkInput& input, const SamplingOptions& opts) {
    const LaplacianBundle b = analyze(input.graph);
    AnalysisReport r;
    r.n = input.graph.size();
    r.weight_units = input.weight_units;
    r.structure = b.structure;
    r.corank = b.corank;
    r.spectrum_L = b.spectrum.eigenvalues;
    r.spectrum_Lpinv = eig(b.L_pinv).eigenvalues;
    r.reep_L = reep_by_sampling(-b.L, opts);
    r.reep_Lpinv = reep_by_sampling(-b.L_pinv, opts);
    r.reep_spectral = reep_by_spectrum(b);
    r.reep_shifted_pf = reep_by_shifted_pf(-b.L);
    try {
        r.equivalence_audit = equivalence_audit(b, opts);
    } catch (const ContractError& e) {
        r.audit_skipped = e.what();
    }
    try {
        const ComplexVector probe = ComplexVector::Zero(r.n);
        (void)predicted_consensus_value(b, probe);
        const ComplexVector one = ComplexVector::Ones(r.n);
        const ComplexVector w = b.left_null / std::conj(b.left_null.dot(one));
        r.consensus_weights = std::vector<Complex>(w.data(), w.data() + w.size());
        r.average_consensus =
            (w - one / static_cast<double>(r.n)).cwiseAbs().maxCoeff() <= 1e-9;
    } catch (const ContractError&) {
        r.consensus_weights.reset();
    }
    return r;
}

std::string report_to_json(const AnalysisReport& r) {
    ordered_json doc;
    doc["schema"] = kReportSchema;
    doc["n"] = r.n;
    doc["weight_units"] = r.weight_units;
    doc["structure"] = {
        {"graph_class", to_string(r.structure.graph_class)},
        {"directed", r.structure.directed},
        {"connected", r.structure.connected},
        {"weight_balanced", r.structure.weight_balanced},
        {"component_count", r.structure.component_count},
    };
    doc["corank"] = r.corank;
    doc["spectrum_L"] = spectrum_json(r.spectrum_L);
    doc["spectrum_Lpinv"] = spectrum_json(r.spectrum_Lpinv);
    doc["reep_L"] = certificate_json(r.reep_L);
    doc["reep_Lpinv"] = certificate_json(r.reep_Lpinv);
    doc["reep_spectral"] = certificate_json(r.reep_spectral);
    doc["reep_shifted_pf"] = certificate_json(r.reep_shifted_pf);
    if (r.equivalence_audit) {
        ordered_json audit;
        audit["chain"] = r.equivalence_audit->chain;
        audit["agreement"] = r.equivalence_audit->agreement;
        audit["anomaly"] = r.equivalence_audit->anomaly;
        audit["clauses"] = ordered_json::array();
        for (const auto& c : r.equivalence_audit->clauses)
            audit["clauses"].push_back({{"name", c.name}, {"value", to_string(c.value)}, {"evidence", c.evidence}});
        doc["equivalence_audit"] = audit;
    } else {
        doc["equivalence_audit"] = nullptr;
        doc["audit_skipped"] = r.audit_skipped;
    }
    if (r.consensus_weights) {
        doc["consensus_prediction"] = {{"weights", spectrum_json(*r.consensus_weights)},
                                       {"average_consensus", r.average_consensus}};
    } else {
        doc["consensus_prediction"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

std::string report_to_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "nodes            " << r.n << " (weights in " << r.weight_units << ")\n";
    os << "class            " << to_string(r.structure.graph_class) << "\n";
    os << (r.structure.directed ? "strongly conn.   " : "connected        ") << (r.structure.connected ? "yes" : "no")
       << " (" << r.structure.component_count << " component" << (r.structure.component_count == 1 ? "" : "s")
       << ")\n";
    if (r.structure.directed) os << "weight-balanced  " << (r.structure.weight_balanced ? "yes" : "no") << "\n";
    os << "corank(L)        " << r.corank << "\n";
    os << "spec(L)         ";
    for (const auto& v : r.spectrum_L) os << ' ' << num(v);
    os << "\nspec(L^+)       ";
    for (const auto& v : r.spectrum_Lpinv) os << ' ' << num(v);
    os << "\n";
    const auto cert = [&](const char* label, const ReepCertificate& c) {
        os << label << to_string(c.verdict) << " [" << to_string(c.criterion) << "]";
        if (c.t0_estimate) os << " t0~" << num(*c.t0_estimate);
        if (c.shift_d) os << " d=" << num(*c.shift_d);
        if (!c.witness.empty()) os << " -- " << c.witness;
        os << "\n";
    };
    cert("-L               ", r.reep_L);
    cert("-L^+             ", r.reep_Lpinv);
    cert("-L (class rule)  ", r.reep_spectral);
    cert("-L (shifted PF)  ", r.reep_shifted_pf);
    if (r.equivalence_audit) {
        os << "audit            " << r.equivalence_audit->chain << ": "
           << (r.equivalence_audit->agreement ? "all clauses agree" : r.equivalence_audit->anomaly) << "\n";
        for (const auto& c : r.equivalence_audit->clauses)
            os << "  " << to_string(c.value) << "\t" << c.name << "\n";
    } else {
        os << "audit            skipped: " << r.audit_skipped << "\n";
    }
    if (r.consensus_weights)
        os << "consensus        " << (r.average_consensus ? "average of x0" : "weighted: w^H x0") << "\n";
    else
        os << "consensus        no single limit\n";
    return os.str();
}

}  // namespace lapflow
