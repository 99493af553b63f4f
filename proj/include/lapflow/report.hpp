#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lapflow/ingest.hpp"
#include "lapflow/reep.hpp"

namespace lapflow {

inline constexpr std::string_view kReportSchema = "lapflow-report/1";

/// Everything `lapflow analyze` says about one network.
struct AnalysisReport {
    Index n = 0;
    std::string weight_units;
    StructureReport structure;
    Index corank = 0;
    std::vector<Complex> spectrum_L;
    std::vector<Complex> spectrum_Lpinv;
    /// Sampling certificates for -L and -L^+.
    ReepCertificate reep_L;
    ReepCertificate reep_Lpinv;
    /// Class-conditional and shifted-PF certificates for -L.
    ReepCertificate reep_spectral;
    ReepCertificate reep_shifted_pf;
    std::optional<AuditReport> equivalence_audit;
    /// Why the audit is absent, when it is.
    std::string audit_skipped;
    /// w with consensus value w^H x0 for every x0 (w = z / conj(z^H 1)),
    /// present only when a consensus limit exists.
    std::optional<std::vector<Complex>> consensus_weights;
    /// w is 1/n within 1e-9 (average consensus).
    bool average_consensus = false;
};

AnalysisReport build_report(const NetworkInput& input, const SamplingOptions& opts = {});

/// Deterministic JSON with "schema": "lapflow-report/1".
std::string report_to_json(const AnalysisReport& r);
std::string report_to_text(const AnalysisReport& r);

}  // namespace lapflow
