#include "lapflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lapflow {

ComplexMatrix laplacian(const ComplexGraph& g) {
    const Index n = g.size();
    ComplexMatrix l = -adjacency(g);
    for (Index i = 0; i < n; ++i) {
        Complex off = 0.0;
        for (Index j = 0; j < n; ++j)
            if (j != i) off += l(i, j);
        l(i, i) = -off;
    }
    return l;
}

ComplexVector row_sums(const ComplexMatrix& m) {
    ComplexVector s(m.rows());
    for (Index i = 0; i < m.rows(); ++i) {
        Complex acc = 0.0;
        for (Index j = 0; j < m.cols(); ++j)
            if (j != i) acc += m(i, j);
        if (i < m.cols()) acc += m(i, i);
        s(i) = acc;
    }
    return s;
}

Index corank(const ComplexMatrix& m, double tol) {
    require_square(m, "corank");
    const auto s = singular_values(m);
    const double cutoff = tol * s.front();
    return static_cast<Index>(std::count_if(s.begin(), s.end(), [cutoff](double v) { return v <= cutoff; }));
}

ComplexMatrix laplacian_pinv(const ComplexMatrix& l, PinvRoute route, double rank_tol) {
    require_square(l, "laplacian_pinv");
    if (route == PinvRoute::General) return pinv(l, rank_tol).matrix;

    const Index n = l.rows();
    const double scale = std::max(norm(l), std::numeric_limits<double>::min());
    const double rows = l.rowwise().sum().cwiseAbs().maxCoeff();
    const double cols = l.colwise().sum().cwiseAbs().maxCoeff();
    if (rows > kZeroTol * scale || cols > kZeroTol * scale)
        throw ContractError("laplacian_pinv: projector route needs zero row and column sums");
    if (corank(l) != 1) throw ContractError("laplacian_pinv: projector route needs corank 1");

    const ComplexMatrix j_over_n = ones(n) / static_cast<double>(n);
    ComplexMatrix p = solve(l + j_over_n, ComplexMatrix::Identity(n, n)).x - j_over_n;

    const auto residuals = penrose_residuals(l, p);
    if (const auto failed = residuals.first_failure(kPinvTol); !failed.empty())
        throw NumericalError("laplacian_pinv: projector result violates " + std::string(failed) +
                             " (residual " + std::to_string(residuals.max()) + ")");
    return p;
}

bool is_psd_corank1(std::span<const Complex> spectrum, double tol) {
    double scale = 0.0;
    for (const auto& v : spectrum) scale = std::max(scale, std::abs(v));
    const double bound = tol * scale;
    int zeros = 0;
    for (const auto& v : spectrum) {
        if (std::abs(v) <= bound)
            ++zeros;
        else if (!(v.real() > bound))
            return false;
    }
    return zeros == 1;
}

bool is_psd_corank1(const ComplexMatrix& m, double tol) {
    const auto dec = eig(m);
    const double bound = tol * norm(m);
    int zeros = 0;
    for (const auto& v : dec.eigenvalues) {
        if (std::abs(v) <= bound)
            ++zeros;
        else if (!(v.real() > bound))
            return false;
    }
    return zeros == 1;
}

std::vector<Complex> pinv_spectrum_map(std::span<const Complex> spectrum, double tol) {
    double scale = 0.0;
    for (const auto& v : spectrum) scale = std::max(scale, std::abs(v));
    const double bound = tol * scale;
    std::vector<Complex> out;
    out.reserve(spectrum.size());
    int zeros = 0;
    for (const auto& v : spectrum) {
        if (std::abs(v) <= bound) {
            ++zeros;
            out.emplace_back(0.0, 0.0);
        } else {
            out.push_back(1.0 / v);
        }
    }
    if (zeros != 1)
        throw ContractError("pinv_spectrum_map: expected exactly one zero eigenvalue, found " +
                            std::to_string(zeros));
    sort_spectrum(out);
    return out;
}

ComplexMatrix symmetric_part(const ComplexMatrix& m, SymmetricPartKind kind) {
    require_square(m, "symmetric_part");
    if (kind == SymmetricPartKind::Transpose) return (m + m.transpose()) / 2.0;
    return (m + m.adjoint()) / 2.0;
}

LaplacianBundle analyze(const ComplexGraph& g) {
    LaplacianBundle b;
    b.structure = classify(g);
    b.L = laplacian(g);
    b.L_pinv = laplacian_pinv(b.L, PinvRoute::General);
    b.spectrum = eig(b.L);
    b.corank = corank(b.L);
    b.right_null = b.spectrum.right_vectors.col(0);
    b.left_null = b.spectrum.left_vectors.col(0);
    return b;
}

double spectral_gap(std::span<const Complex> spectrum, double tol) {
    double scale = 0.0;
    for (const auto& v : spectrum) scale = std::max(scale, std::abs(v));
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& v : spectrum)
        if (std::abs(v) > tol * scale) gap = std::min(gap, v.real());
    return std::isfinite(gap) ? gap : 0.0;
}

ComplexMatrix limit_matrix(const LaplacianBundle& bundle) {
    if (bundle.corank != 1)
        throw ContractError("limit_matrix: corank is " + std::to_string(bundle.corank) + ", expected 1");
    const double bound = kZeroTol * norm(bundle.L);
    const auto& values = bundle.spectrum.eigenvalues;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i].real() > bound))
            throw ContractError("limit_matrix: eigenvalue with non-positive real part; no limit exists");
    const Complex overlap = bundle.left_null.dot(bundle.right_null);
    return bundle.right_null * bundle.left_null.adjoint() / overlap;
}

}  // namespace lapflow
