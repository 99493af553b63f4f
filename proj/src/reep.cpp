#include "lapflow/reep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lapflow {

namespace {

constexpr double kDivergenceNorm = 1e12;

std::string fmt(Complex z) {
    std::ostringstream os;
    os.precision(6);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Tri tri(bool b) { return b ? Tri::True : Tri::False; }

Tri tri(Verdict v) {
    switch (v) {
        case Verdict::Reep: return Tri::True;
        case Verdict::NotReep: return Tri::False;
        case Verdict::Inconclusive: return Tri::Unknown;
    }
    return Tri::Unknown;
}

bool vector_in_O(const ComplexVector& v, bool& borderline) {
    bool ok = true;
    for (Index i = 0; i < v.size(); ++i) {
        const double margin = v(i).real() - std::abs(v(i).imag());
        if (std::abs(margin) <= kVectorTol) borderline = true;
        if (margin < -kVectorTol) ok = false;
    }
    return ok;
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Reep: return "rEEP";
        case Verdict::NotReep: return "not_rEEP";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::Sampling: return "sampling";
        case Criterion::ShiftedPf: return "shifted_pf";
        case Criterion::SpectralClass: return "spectral_class";
    }
    return "?";
}

std::string_view to_string(Tri t) {
    switch (t) {
        case Tri::True: return "true";
        case Tri::False: return "false";
        case Tri::Unknown: return "unknown";
    }
    return "?";
}

PfReport strong_pf_check(const ComplexMatrix& m) {
    const auto dec = eig(m);
    PfReport r;
    const auto& values = dec.eigenvalues;
    const Index top = dec.size() - 1;
    r.dominant_eigenvalue = values.back();
    if (dec.is_defective) {
        r.diagnostic = "eigenvector basis is defective (rcond " + fmt(dec.basis_rcond) + ")";
        return r;
    }
    const double rho = std::abs(r.dominant_eigenvalue);
    const double gap = 1e-8 * rho;
    r.dominant_positive = std::abs(r.dominant_eigenvalue.imag()) <= gap && r.dominant_eigenvalue.real() > gap;

    int coincident = 0;
    r.strictly_dominant = true;
    for (Index j = 0; j < dec.size(); ++j) {
        if (std::abs(values[static_cast<std::size_t>(j)] - r.dominant_eigenvalue) <= gap) ++coincident;
        if (j != top && !(rho > std::abs(values[static_cast<std::size_t>(j)]) + gap)) r.strictly_dominant = false;
    }
    r.is_simple = coincident == 1;

    const ComplexVector x = dec.right_vectors.col(top);
    const ComplexVector z = dec.left_vectors.col(top);
    r.right_vector_ok = true;
    for (Index i = 0; i < x.size(); ++i) {
        if (std::abs(x(i).real()) <= kVectorTol) r.borderline = true;
        if (!(x(i).real() > kVectorTol)) r.right_vector_ok = false;
    }
    const bool x_in = vector_in_O(x, r.borderline);
    const bool z_in = vector_in_O(z, r.borderline);
    r.in_set_O = x_in && z_in;
    if (!r.is_simple) r.diagnostic = "dominant eigenvalue is repeated";
    else if (!r.strictly_dominant) r.diagnostic = "another eigenvalue has the same modulus";
    return r;
}

double shift_d(std::span<const Complex> spectrum, double tol) {
    double scale = 0.0;
    for (const auto& v : spectrum) scale = std::max(scale, std::abs(v));
    const double bound = tol * scale;
    int zeros = 0;
    double threshold = 0.0;
    for (const auto& v : spectrum) {
        if (std::abs(v) <= bound) {
            ++zeros;
            continue;
        }
        if (!(v.real() > bound))
            throw ContractError("shift_d: eigenvalue " + fmt(v) + " has non-positive real part");
        threshold = std::max(threshold, std::norm(v) / (2.0 * v.real()));
    }
    if (zeros != 1)
        throw ContractError("shift_d: expected exactly one zero eigenvalue, found " + std::to_string(zeros));
    return 1.01 * threshold;
}

DominantMode dominant_mode(const ComplexMatrix& m) {
    DominantMode out;
    const auto dec = eig(m);
    const auto& values = dec.eigenvalues;
    const double tol = kZeroTol * norm(m);

    std::size_t lead = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i].real() > values[lead].real()) lead = i;
    out.eigenvalue = values[lead];

    std::vector<Index> cluster;
    double next_re = -std::numeric_limits<double>::infinity();
    bool tied = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::abs(values[i] - out.eigenvalue) <= tol) {
            cluster.push_back(static_cast<Index>(i));
        } else {
            next_re = std::max(next_re, values[i].real());
            if (values[i].real() >= out.eigenvalue.real() - tol) tied = true;
        }
    }
    out.separation = out.eigenvalue.real() - next_re;

    if (dec.is_defective) {
        out.witness = "defective eigenvector basis; asymptotic term not resolved";
        return out;
    }
    if (tied) {
        out.witness = "several distinct eigenvalues share the largest real part";
        return out;
    }
    out.projector = spectral_projector(dec, cluster);
    if (std::abs(out.eigenvalue.imag()) > tol) {
        out.sign = DominantMode::Sign::NonPositive;
        out.witness = "dominant eigenvalue " + fmt(out.eigenvalue) +
                      " is not real, so the asymptotic term rotates through negative real parts";
        return out;
    }

    const double pmax = out.projector.cwiseAbs().maxCoeff();
    Index wi = 0, wj = 0;
    const double worst = out.projector.real().minCoeff(&wi, &wj);
    if (worst > 1e-9 * pmax) {
        out.sign = DominantMode::Sign::Positive;
    } else {
        out.sign = DominantMode::Sign::NonPositive;
        out.witness = "asymptotic term e^{" + fmt(out.eigenvalue.real()) + " t} P has Re(P[" +
                      std::to_string(wi) + "][" + std::to_string(wj) + "]) = " + fmt(worst) + " <= 0";
    }
    return out;
}

ReepCertificate reep_by_sampling(const ComplexMatrix& m, const SamplingOptions& opts) {
    require_square(m, "reep_by_sampling");
    if (opts.samples < 16) throw ContractError("reep_by_sampling: need at least 16 samples");
    if (opts.t_max && !(*opts.t_max > 0.0)) throw ContractError("reep_by_sampling: t_max must be positive");

    ReepCertificate cert;
    cert.criterion = Criterion::Sampling;
    const DominantMode mode = dominant_mode(m);

    double t_max = 0.0;
    if (opts.t_max) {
        t_max = *opts.t_max;
    } else if (std::isfinite(mode.separation) && mode.separation > 0.0) {
        t_max = 20.0 / mode.separation;
    } else {
        const double rho = std::abs(eig(m).eigenvalues.back());
        t_max = rho > 0.0 ? 20.0 / rho : 20.0;
    }

    const Index k_total = opts.samples;
    std::vector<double> times, min_re;
    for (Index k = 0; k < k_total; ++k) {
        const double t =
            t_max * std::pow(1000.0, static_cast<double>(k + 1) / static_cast<double>(k_total) - 1.0);
        ComplexMatrix e;
        try {
            e = expm(m * t);
        } catch (const SaturationError&) {
            cert.diverged = true;
        }
        if (cert.diverged || norm(e) > kDivergenceNorm) {
            cert.diverged = true;
            cert.witness = "Re(e^{Mt}) diverges by t = " + fmt(t);
            break;
        }
        times.push_back(t);
        min_re.push_back(e.real().minCoeff());
    }

    // Earliest index from which every evaluated sample is positive.
    std::optional<std::size_t> tail;
    for (std::size_t k = min_re.size(); k-- > 0;) {
        if (!(min_re[k] > opts.eps_pos)) break;
        tail = k;
    }
    // Once every entry exceeds 2 eps_pos with a positive gap, no later
    // sample may fall back to a non-positive entry.
    bool onset_lost = false;
    if (std::isfinite(mode.separation) && mode.separation > 0.0) {
        const auto first = std::find_if(min_re.begin(), min_re.end(),
                                        [&](double v) { return v > 2.0 * opts.eps_pos; });
        if (first != min_re.end())
            onset_lost = std::any_of(first + 1, min_re.end(), [](double v) { return !(v > 0.0); });
    }

    using Sign = DominantMode::Sign;
    if (mode.sign == Sign::NonPositive) {
        cert.verdict = Verdict::NotReep;
        cert.witness = mode.witness;
    } else if (cert.diverged && mode.sign != Sign::Positive) {
        cert.verdict = Verdict::NotReep;
    } else if (mode.sign == Sign::Positive && onset_lost) {
        cert.verdict = Verdict::Inconclusive;
        cert.witness = "real parts became positive and later lost positivity";
    } else if (mode.sign == Sign::Positive && tail && !min_re.empty()) {
        cert.verdict = Verdict::Reep;
        cert.t0_estimate = times[*tail];
        cert.witness.clear();
    } else {
        cert.verdict = Verdict::Inconclusive;
        if (cert.witness.empty())
            cert.witness = mode.sign == Sign::Unknown ? mode.witness
                                                      : "real parts not yet positive by t_max = " + fmt(t_max);
    }
    cert.rule = "t_max = " + fmt(t_max) + ", samples = " + std::to_string(times.size());
    return cert;
}

ReepCertificate reep_by_spectrum(const LaplacianBundle& b) {
    ReepCertificate cert;
    cert.criterion = Criterion::SpectralClass;
    const auto& s = b.structure;
    const auto corank_rule = [&](std::string rule) {
        cert.rule = std::move(rule);
        cert.verdict = b.corank == 1 ? Verdict::Reep : Verdict::NotReep;
        if (b.corank != 1) cert.witness = "corank(L) = " + std::to_string(b.corank);
    };

    switch (s.graph_class) {
        case GraphClass::UnsignedUndirected:
            corank_rule("unsigned undirected: rEEP iff corank(L) = 1");
            break;
        case GraphClass::SignedUndirected: {
            cert.rule = "signed undirected, L complex symmetric: rEEP iff L psd of corank 1";
            if ((b.L - b.L.transpose()).norm() > kZeroTol * norm(b.L)) {
                cert.verdict = Verdict::Inconclusive;
                cert.witness = "L is not complex symmetric";
                break;
            }
            const bool psd = is_psd_corank1(b.spectrum.eigenvalues);
            cert.verdict = psd ? Verdict::Reep : Verdict::NotReep;
            if (!psd) {
                const double bound = kZeroTol * norm(b.L);
                for (std::size_t i = 1; i < b.spectrum.eigenvalues.size(); ++i) {
                    const auto v = b.spectrum.eigenvalues[i];
                    if (!(v.real() > bound)) {
                        cert.witness = "eigenvalue " + fmt(v) + " outside the open right half-plane";
                        break;
                    }
                }
                if (cert.witness.empty()) cert.witness = "zero eigenvalue is not simple";
            }
            break;
        }
        case GraphClass::UnsignedDigraph:
            if (s.connected && s.weight_balanced) {
                corank_rule("unsigned strongly connected weight-balanced digraph: rEEP iff corank(L) = 1");
            } else {
                cert.verdict = Verdict::Inconclusive;
                cert.rule = "unsigned digraph outside the strongly connected weight-balanced class";
                cert.witness = !s.connected ? "digraph is not strongly connected" : "digraph is not weight-balanced";
            }
            break;
        case GraphClass::SignedDigraph:
            cert.verdict = Verdict::Inconclusive;
            cert.rule = "signed digraph: no spectral criterion";
            cert.witness = "signed digraphs are outside every criterion";
            break;
    }
    return cert;
}

ReepCertificate reep_by_shifted_pf(const ComplexMatrix& m) {
    require_square(m, "reep_by_shifted_pf");
    ReepCertificate cert;
    cert.criterion = Criterion::ShiftedPf;
    const auto spec = eig(-m).eigenvalues;
    double d = 0.0;
    try {
        d = shift_d(spec);
    } catch (const ContractError& e) {
        cert.witness = std::string("no admissible shift: ") + e.what();
        return cert;
    }
    cert.shift_d = d;
    const ComplexMatrix shifted = m + d * ComplexMatrix::Identity(m.rows(), m.cols());
    const PfReport pf = strong_pf_check(shifted);
    if (pf.strong_pf() && pf.in_set_O && !pf.borderline) {
        cert.verdict = Verdict::Reep;
        cert.rule = "M + dI has the strong PF property with dominant vectors in O";
    } else {
        cert.witness = pf.borderline ? "dominant vector entries on the boundary of O"
                       : !pf.strong_pf() ? "M + dI lacks the strong PF property" + (pf.diagnostic.empty() ? std::string() : ": " + pf.diagnostic)
                                         : "dominant vectors of M + dI are outside O";
    }
    return cert;
}

AuditReport equivalence_audit(const LaplacianBundle& b, const SamplingOptions& opts) {
    const auto& s = b.structure;
    AuditReport audit;
    const auto sample = [&](const ComplexMatrix& gen) {
        const auto c = reep_by_sampling(gen, opts);
        return std::pair{tri(c.verdict), std::string(to_string(c.verdict)) +
                                             (c.witness.empty() ? "" : " (" + c.witness + ")")};
    };
    const auto add = [&](std::string name, Tri value, std::string evidence) {
        audit.clauses.push_back({std::move(name), value, std::move(evidence)});
    };

    const Index pinv_corank = corank(b.L_pinv);
    switch (s.graph_class) {
        case GraphClass::UnsignedUndirected: {
            audit.chain = "unsigned-undirected";
            add("L has a simple zero eigenvalue", tri(b.corank == 1), "corank(L) = " + std::to_string(b.corank));
            auto [l_val, l_ev] = sample(-b.L);
            add("-L is rEEP", l_val, l_ev);
            add("L^+ is psd of corank 1", tri(is_psd_corank1(b.L_pinv)), "");
            auto [p_val, p_ev] = sample(-b.L_pinv);
            add("-L^+ is rEEP", p_val, p_ev);
            break;
        }
        case GraphClass::SignedUndirected: {
            audit.chain = "signed-undirected";
            add("L is psd of corank 1", tri(is_psd_corank1(b.spectrum.eigenvalues)), "");
            auto [l_val, l_ev] = sample(-b.L);
            add("-L is rEEP", l_val, l_ev);
            add("L^+ is psd of corank 1", tri(is_psd_corank1(b.L_pinv)), "");
            auto [p_val, p_ev] = sample(-b.L_pinv);
            add("-L^+ is rEEP", p_val, p_ev);
            break;
        }
        case GraphClass::UnsignedDigraph: {
            if (!s.connected || !s.weight_balanced)
                throw ContractError("equivalence_audit: digraph must be strongly connected and weight-balanced");
            audit.chain = "balanced-digraph";
            add("L has a simple zero eigenvalue", tri(b.corank == 1), "corank(L) = " + std::to_string(b.corank));
            auto [l_val, l_ev] = sample(-b.L);
            add("-L is rEEP", l_val, l_ev);
            add("-L^+ has a simple zero eigenvalue", tri(pinv_corank == 1),
                "corank(L^+) = " + std::to_string(pinv_corank));
            auto [p_val, p_ev] = sample(-b.L_pinv);
            add("-L^+ is rEEP", p_val, p_ev);
            add("(L^+)_s is psd of corank 1", tri(is_psd_corank1(symmetric_part(b.L_pinv))), "");
            break;
        }
        case GraphClass::SignedDigraph:
            throw ContractError("equivalence_audit: signed digraphs have no equivalence chain");
    }

    std::optional<Tri> first;
    for (const auto& c : audit.clauses) {
        if (c.value == Tri::Unknown) continue;
        if (!first) first = c.value;
        else if (*first != c.value) audit.agreement = false;
    }
    if (!audit.agreement) {
        std::ostringstream os;
        os << "clauses disagree:";
        for (const auto& c : audit.clauses) os << " [" << c.name << ": " << to_string(c.value) << "]";
        audit.anomaly = os.str();
    }
    return audit;
}

}  // namespace lapflow
