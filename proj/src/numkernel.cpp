#include "lapflow/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include <unsupported/Eigen/MatrixFunctions>

namespace lapflow {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool all_finite(const ComplexMatrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

double scale_or_one(double s) { return s > 0.0 ? s : 1.0; }

}  // namespace

void require_finite(const ComplexMatrix& m, std::string_view what) {
    if (m.rows() < 1 || m.cols() < 1)
        throw ContractError(std::string(what) + ": matrix must have at least one row and column");
    if (!all_finite(m)) throw ContractError(std::string(what) + ": matrix has non-finite entries");
}

void require_square(const ComplexMatrix& m, std::string_view what) {
    require_finite(m, what);
    if (m.rows() != m.cols())
        throw ContractError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected square");
}

double norm(const ComplexMatrix& m) { return m.norm(); }

ComplexVector fix_phase(const ComplexVector& v) {
    const double len = v.norm();
    if (len == 0.0) return v;
    ComplexVector u = v / len;
    double best = 0.0;
    for (Index i = 0; i < u.size(); ++i) best = std::max(best, std::abs(u(i)));
    // first entry whose modulus is the maximum up to rounding
    Index pivot = 0;
    for (Index i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) >= best * (1.0 - 1e-9)) {
            pivot = i;
            break;
        }
    }
    const Complex rot = std::conj(u(pivot)) / std::abs(u(pivot));
    u *= rot;
    u(pivot) = Complex(std::abs(u(pivot)), 0.0);
    return u;
}

std::vector<Index> spectrum_order(std::span<const Complex> values) {
    double scale = 0.0;
    for (const auto& v : values) scale = std::max(scale, std::abs(v));
    scale = scale_or_one(scale);
    using Key = std::tuple<long long, long long, long long, Index>;
    std::vector<Key> keys;
    keys.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto q = [scale](double x) { return std::llround(x / scale * 1e9); };
        keys.emplace_back(q(std::abs(values[i])), q(values[i].real()), q(values[i].imag()),
                          static_cast<Index>(i));
    }
    std::sort(keys.begin(), keys.end());
    std::vector<Index> order;
    order.reserve(keys.size());
    for (const auto& k : keys) order.push_back(std::get<3>(k));
    return order;
}

void sort_spectrum(std::vector<Complex>& values) {
    const auto order = spectrum_order(values);
    std::vector<Complex> sorted;
    sorted.reserve(values.size());
    for (Index i : order) sorted.push_back(values[static_cast<std::size_t>(i)]);
    values = std::move(sorted);
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    require_finite(m, "singular_values");
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

EigenDecomposition eig(const ComplexMatrix& m) {
    require_square(m, "eig");
    const Index n = m.rows();

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eig: QR iteration did not converge");

    const ComplexVector values = solver.eigenvalues();
    const ComplexMatrix vectors = solver.eigenvectors();

    EigenDecomposition out;
    {
        Eigen::JacobiSVD<ComplexMatrix> svd(vectors);
        const auto& s = svd.singularValues();
        out.basis_rcond = s(0) > 0.0 ? s(n - 1) / s(0) : 0.0;
    }
    out.is_defective = out.basis_rcond < kDefectiveRcond;

    // Left vectors: rows of V^{-1} when the basis is sound, otherwise the
    // left singular vector of (M - lambda I) belonging to its smallest
    // singular value.
    ComplexMatrix left(n, n);
    if (!out.is_defective) {
        const ComplexMatrix inv = vectors.fullPivLu().inverse();
        left = inv.adjoint();
    } else {
        for (Index i = 0; i < n; ++i) {
            const ComplexMatrix shifted = m - values(i) * ComplexMatrix::Identity(n, n);
            Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullU);
            left.col(i) = svd.matrixU().col(n - 1);
        }
    }

    std::vector<Complex> raw(values.data(), values.data() + n);
    const auto order = spectrum_order(raw);
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    out.right_vectors.resize(n, n);
    out.left_vectors.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index src = order[static_cast<std::size_t>(k)];
        out.eigenvalues[static_cast<std::size_t>(k)] = values(src);
        out.right_vectors.col(k) = fix_phase(vectors.col(src));
        out.left_vectors.col(k) = fix_phase(left.col(src));
    }

    const double scale = scale_or_one(norm(m));
    for (Index k = 0; k < n; ++k) {
        const Complex lambda = out.eigenvalues[static_cast<std::size_t>(k)];
        const auto& x = out.right_vectors.col(k);
        const auto& z = out.left_vectors.col(k);
        const double right_res = (m * x - lambda * x).norm() / scale;
        const double left_res = (z.adjoint() * m - lambda * z.adjoint()).norm() / scale;
        out.max_residual = std::max({out.max_residual, right_res, left_res});
    }
    if (!out.is_defective && out.max_residual > kEigTol)
        throw NumericalError("eig: eigenpair residual " + std::to_string(out.max_residual) +
                             " exceeds tolerance");
    return out;
}

ComplexMatrix spectral_projector(const EigenDecomposition& dec, std::span<const Index> indices) {
    const Index n = dec.size();
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (Index i : indices) {
        const auto& x = dec.right_vectors.col(i);
        const auto& z = dec.left_vectors.col(i);
        const Complex overlap = z.dot(x);  // z^H x
        if (std::abs(overlap) == 0.0)
            throw NumericalError("spectral_projector: left and right eigenvectors are orthogonal");
        p += x * z.adjoint() / overlap;
    }
    return p;
}

Pseudoinverse pinv(const ComplexMatrix& m, std::optional<double> rank_tol) {
    require_finite(m, "pinv");
    const double tol =
        rank_tol.value_or(static_cast<double>(std::max(m.rows(), m.cols())) * kEps);
    if (!(tol > 0.0)) throw ContractError("pinv: rank_tol must be positive");

    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();

    Pseudoinverse out;
    out.singular_values.assign(s.data(), s.data() + s.size());
    out.cutoff = s.size() > 0 ? tol * s(0) : 0.0;
    out.matrix = ComplexMatrix::Zero(m.cols(), m.rows());
    for (Index k = 0; k < s.size(); ++k) {
        if (s(k) <= out.cutoff || s(k) == 0.0) continue;
        out.matrix += svd.matrixV().col(k) * (1.0 / s(k)) * svd.matrixU().col(k).adjoint();
        ++out.rank;
    }
    return out;
}

double PenroseResiduals::max() const { return std::max({mpm, pmp, mp_hermitian, pm_hermitian}); }

std::string_view PenroseResiduals::first_failure(double tol) const {
    if (mpm > tol) return "M P M = M";
    if (pmp > tol) return "P M P = P";
    if (mp_hermitian > tol) return "(M P)^H = M P";
    if (pm_hermitian > tol) return "(P M)^H = P M";
    return {};
}

PenroseResiduals penrose_residuals(const ComplexMatrix& m, const ComplexMatrix& p) {
    if (p.rows() != m.cols() || p.cols() != m.rows())
        throw ContractError("penrose_residuals: shape mismatch");
    const ComplexMatrix mp = m * p;
    const ComplexMatrix pm = p * m;
    PenroseResiduals r;
    r.mpm = (mp * m - m).norm() / scale_or_one(norm(m));
    r.pmp = (pm * p - p).norm() / scale_or_one(norm(p));
    r.mp_hermitian = (mp.adjoint() - mp).norm();
    r.pm_hermitian = (pm.adjoint() - pm).norm();
    return r;
}

ComplexMatrix expm(const ComplexMatrix& m) {
    require_square(m, "expm");
    ComplexMatrix out = m.exp();
    if (!all_finite(out))
        throw SaturationError("expm: result overflows (norm " + std::to_string(norm(m)) + ")");
    return out;
}

LinearSolution solve(const ComplexMatrix& m, const ComplexMatrix& b) {
    require_square(m, "solve");
    require_finite(b, "solve");
    if (b.rows() != m.rows()) throw ContractError("solve: right-hand side has wrong row count");
    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    LinearSolution out;
    out.rcond = lu.rcond();
    if (!(out.rcond > static_cast<double>(m.rows()) * kEps))
        throw NumericalError("solve: matrix is singular to working precision (rcond " +
                             std::to_string(out.rcond) + ")");
    out.x = lu.solve(b);
    return out;
}

bool is_real_positive(const ComplexMatrix& m, double eps) {
    return (m.real().array() > eps).all();
}

bool is_nonnegative(const ComplexMatrix& m) {
    return (m.real().array() >= 0.0).all() && (m.imag().array() >= 0.0).all();
}

ComplexMatrix ones(Index n) { return ComplexMatrix::Ones(n, n); }

}  // namespace lapflow
