#pragma once

#include <span>
#include <vector>

#include "lapflow/netmodel.hpp"
#include "lapflow/numkernel.hpp"

namespace lapflow {

/// Zero-eigenvalue / numerical-rank tolerance, relative to the matrix norm.
inline constexpr double kZeroTol = 1e-8;

/// L = D_out - A. The diagonal is the negated sum of the off-diagonal row
/// entries in ascending column order, so `row_sums` is exactly zero.
ComplexMatrix laplacian(const ComplexGraph& g);

/// Row sums evaluated as: off-diagonal entries in ascending column order,
/// then the diagonal. For matrices from `laplacian` this is exactly zero.
ComplexVector row_sums(const ComplexMatrix& m);

enum class PinvRoute { General, Projector };

/// Laplacian pseudoinverse.
///  - General: SVD pseudoinverse with numerical rank cutoff `rank_tol`.
///  - Projector: (L + J/n)^{-1} - J/n. Requires zero row and column sums and
///    corank 1; the result is checked against all four Penrose relations and
///    a NumericalError names the first relation that fails.
ComplexMatrix laplacian_pinv(const ComplexMatrix& l, PinvRoute route, double rank_tol = kZeroTol);

/// Number of singular values <= tol * sigma_max.
Index corank(const ComplexMatrix& m, double tol = kZeroTol);

/// Exactly one eigenvalue with |lambda| <= tol * |M| and every other
/// eigenvalue with Re(lambda) > tol * |M|.
bool is_psd_corank1(const ComplexMatrix& m, double tol = kZeroTol);
/// Same test on a given spectrum; the scale is the largest modulus.
bool is_psd_corank1(std::span<const Complex> spectrum, double tol = kZeroTol);

/// {0} together with 1/lambda for every nonzero lambda, sorted with
/// `sort_spectrum`. Throws ContractError unless exactly one eigenvalue is
/// zero within tol * max|lambda|.
std::vector<Complex> pinv_spectrum_map(std::span<const Complex> spectrum, double tol = kZeroTol);

enum class SymmetricPartKind { Hermitian, Transpose };

/// (M + M^H)/2 by default; (M + M^T)/2 on request.
ComplexMatrix symmetric_part(const ComplexMatrix& m, SymmetricPartKind kind = SymmetricPartKind::Hermitian);

/// Everything the certificate and flow code needs about one graph.
struct LaplacianBundle {
    ComplexMatrix L;
    ComplexMatrix L_pinv;
    EigenDecomposition spectrum;
    Index corank = 0;
    /// Right and left eigenvectors of the smallest-modulus eigenvalue.
    ComplexVector right_null;
    ComplexVector left_null;
    StructureReport structure;
};

LaplacianBundle analyze(const ComplexGraph& g);

/// Spectral projector x z^H / (z^H x) onto the null direction, i.e. the
/// limit of expm(-L t). Throws ContractError unless corank is 1 and every
/// nonzero eigenvalue has Re > kZeroTol * |L|.
ComplexMatrix limit_matrix(const LaplacianBundle& bundle);

/// Smallest real part among the nonzero eigenvalues of `spectrum`; zero
/// when no eigenvalue is nonzero.
double spectral_gap(std::span<const Complex> spectrum, double tol = kZeroTol);

}  // namespace lapflow
