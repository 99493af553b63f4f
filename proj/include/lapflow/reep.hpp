#pragma once

// Certification of real eventual exponential positivity: Re(e^{Mt}) > 0
// entrywise for every t beyond some t0. Three independent routes are
// provided (time sampling with an asymptotic check, a shifted Perron-
// Frobenius certificate, and class-conditional spectral criteria for
// Laplacians) plus an audit that evaluates every clause of the matching
// equivalence chain separately.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lapflow/spectral.hpp"

namespace lapflow {

enum class Verdict { Reep, NotReep, Inconclusive };
enum class Criterion { Sampling, ShiftedPf, SpectralClass };

std::string_view to_string(Verdict v);
std::string_view to_string(Criterion c);

/// Tolerance on eigenvector sign conditions (entries of unit vectors).
inline constexpr double kVectorTol = 1e-9;

struct PfReport {
    Complex dominant_eigenvalue;
    /// Dominant eigenvalue real and positive.
    bool dominant_positive = false;
    bool is_simple = false;
    bool strictly_dominant = false;
    /// Re(x) > 0 entrywise for the phase-fixed dominant right vector.
    bool right_vector_ok = false;
    /// Re(v) >= |Im(v)| entrywise for both dominant right and left vectors.
    bool in_set_O = false;
    /// Some vector entry sits within kVectorTol of a sign boundary.
    bool borderline = false;
    std::string diagnostic;

    bool strong_pf() const { return dominant_positive && is_simple && strictly_dominant && right_vector_ok; }
};

/// Strong complex Perron-Frobenius test on the eigenvalue of largest
/// modulus. The dominance gap is 1e-8 * rho(M). A defective decomposition
/// leaves every flag false and explains why in `diagnostic`.
PfReport strong_pf_check(const ComplexMatrix& m);

/// Shift d making dI - L have the strictly dominant eigenvalue d at the
/// null direction: 1.01 * max |lambda|^2 / (2 Re lambda) over the nonzero
/// eigenvalues of L. Throws ContractError unless the spectrum has exactly
/// one zero and every other eigenvalue has Re > 0.
double shift_d(std::span<const Complex> laplacian_spectrum, double tol = kZeroTol);

struct ReepCertificate {
    Verdict verdict = Verdict::Inconclusive;
    Criterion criterion = Criterion::Sampling;
    std::optional<double> shift_d;
    std::optional<double> t0_estimate;
    /// Why the verdict is not rEEP, or what made it inconclusive.
    std::string witness;
    /// Which rule fired (spectral_class) or extra evidence.
    std::string rule;
    bool diverged = false;
};

struct SamplingOptions {
    /// Defaults to 20 / separation of the dominant eigenvalue from the rest.
    std::optional<double> t_max;
    Index samples = 64;
    double eps_pos = 1e-12;
};

/// Behaviour of e^{Mt} for large t, read off the eigenvalue(s) of largest
/// real part.
struct DominantMode {
    enum class Sign { Positive, NonPositive, Unknown };
    Sign sign = Sign::Unknown;
    Complex eigenvalue;
    /// Re(dominant) minus the largest real part among the other eigenvalues.
    double separation = 0.0;
    ComplexMatrix projector;
    std::string witness;
};

DominantMode dominant_mode(const ComplexMatrix& m);

/// Samples Re(expm(M t)) on a geometric grid over (t_max/1000, t_max] and
/// combines the tail with the dominant-mode sign:
///  - not_rEEP when the asymptotic term has a non-positive real entry, or
///    the trajectory diverges without a positive asymptotic term;
///  - rEEP when the asymptotic term is positive and every sample from some
///    index on exceeds eps_pos (t0_estimate is that sample time);
///  - inconclusive otherwise, including positivity that appears and is
///    later lost.
ReepCertificate reep_by_sampling(const ComplexMatrix& m, const SamplingOptions& opts = {});

/// Class-conditional criteria on a Laplacian:
///  (a) unsigned undirected: rEEP iff corank(L) = 1;
///  (b) signed undirected, L = L^T: rEEP iff L is psd of corank 1;
///  (c) unsigned, strongly connected, weight-balanced digraph: rEEP iff corank(L) = 1;
///  (d) anything else: inconclusive.
/// The verdict is about -L.
ReepCertificate reep_by_spectrum(const LaplacianBundle& bundle);

/// Treats M as -L: picks d = shift_d(spec(-M)) and reports rEEP when
/// M + dI has the strong PF property with dominant vectors in the set O.
/// Inconclusive when no valid shift exists or the vector conditions fail.
ReepCertificate reep_by_shifted_pf(const ComplexMatrix& m);

enum class Tri { True, False, Unknown };
std::string_view to_string(Tri t);

struct AuditClause {
    std::string name;
    Tri value = Tri::Unknown;
    std::string evidence;
};

struct AuditReport {
    /// "unsigned-undirected", "signed-undirected" or "balanced-digraph".
    std::string chain;
    std::vector<AuditClause> clauses;
    /// All conclusive clauses carry the same value.
    bool agreement = true;
    std::string anomaly;
};

/// Evaluates each clause of the equivalence chain matching the graph class
/// independently. Throws ContractError for signed digraphs and for digraphs
/// that are not strongly connected and weight-balanced.
AuditReport equivalence_audit(const LaplacianBundle& bundle, const SamplingOptions& opts = {});

}  // namespace lapflow
