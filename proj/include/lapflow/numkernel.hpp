#pragma once

// Dense complex linear algebra used by every other module: eigendecomposition
// with paired left/right vectors, Moore-Penrose pseudoinverse, matrix
// exponential and linear solves. Everything here is a pure function of its
// arguments.

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lapflow/errors.hpp"

namespace lapflow {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Relative residual bound for eigenpairs.
inline constexpr double kEigTol = 1e-8;
/// Relative residual bound for the Penrose relations.
inline constexpr double kPinvTol = 1e-8;
/// Eigenvector bases with reciprocal condition below this are reported defective.
inline constexpr double kDefectiveRcond = 1e-10;

void require_finite(const ComplexMatrix& m, std::string_view what);
void require_square(const ComplexMatrix& m, std::string_view what);

/// Frobenius norm; the scale every relative tolerance in the library refers to.
double norm(const ComplexMatrix& m);

/// Normalizes `v` to unit length and rotates it so the entry of largest
/// modulus (first one on ties) is real and positive. Zero vectors are
/// returned unchanged.
ComplexVector fix_phase(const ComplexVector& v);

/// Strict weak order used for every spectrum the library emits: ascending
/// modulus, then real part, then imaginary part. Values are compared after
/// quantization to 1e-9 of `scale` so rounding noise cannot flip ties.
void sort_spectrum(std::vector<Complex>& values);
std::vector<Index> spectrum_order(std::span<const Complex> values);

struct EigenDecomposition {
    /// Sorted per `sort_spectrum`.
    std::vector<Complex> eigenvalues;
    /// Column i pairs with eigenvalues[i]; unit norm, phase-fixed.
    ComplexMatrix right_vectors;
    /// Column i is z_i with z_i^H M = lambda_i z_i^H; unit norm, phase-fixed.
    ComplexMatrix left_vectors;
    bool is_defective = false;
    /// Reciprocal condition number of the right eigenvector basis.
    double basis_rcond = 0.0;
    /// Largest relative residual over all left and right pairs.
    double max_residual = 0.0;

    Index size() const { return static_cast<Index>(eigenvalues.size()); }
};

/// Eigendecomposition of a square finite matrix. Throws NumericalError when
/// the QR iteration fails or, for a non-defective matrix, when a residual
/// exceeds kEigTol relative to norm(m).
EigenDecomposition eig(const ComplexMatrix& m);

/// Sum of x_i z_i^H / (z_i^H x_i) over the given indices: the spectral
/// projector onto those eigenvalues. Meaningful only when the decomposition
/// is not defective.
ComplexMatrix spectral_projector(const EigenDecomposition& dec, std::span<const Index> indices);

struct Pseudoinverse {
    ComplexMatrix matrix;
    Index rank = 0;
    /// Absolute singular-value cutoff that was applied.
    double cutoff = 0.0;
    std::vector<double> singular_values;
};

/// Moore-Penrose pseudoinverse through a full SVD. Singular values at or
/// below rank_tol * sigma_max count as zero; the default rank_tol is
/// max(rows, cols) * machine epsilon.
Pseudoinverse pinv(const ComplexMatrix& m, std::optional<double> rank_tol = std::nullopt);

struct PenroseResiduals {
    double mpm = 0.0;           ///< |M P M - M| / |M|
    double pmp = 0.0;           ///< |P M P - P| / |P|
    double mp_hermitian = 0.0;  ///< |(M P)^H - M P|, absolute
    double pm_hermitian = 0.0;  ///< |(P M)^H - P M|, absolute

    double max() const;
    /// Name of the first relation exceeding `tol`, or empty.
    std::string_view first_failure(double tol) const;
};

PenroseResiduals penrose_residuals(const ComplexMatrix& m, const ComplexMatrix& p);

/// e^M by scaling and squaring with a Pade approximant. Throws
/// SaturationError when the result is not representable.
ComplexMatrix expm(const ComplexMatrix& m);

struct LinearSolution {
    ComplexMatrix x;
    /// LU-based reciprocal condition estimate of the coefficient matrix.
    double rcond = 0.0;
};

/// Solves M X = B. Throws NumericalError when M is singular to working precision.
LinearSolution solve(const ComplexMatrix& m, const ComplexMatrix& b);

std::vector<double> singular_values(const ComplexMatrix& m);

/// Re(m_ij) > eps for every entry.
bool is_real_positive(const ComplexMatrix& m, double eps = 0.0);
/// Re(m_ij) >= 0 and Im(m_ij) >= 0 for every entry.
bool is_nonnegative(const ComplexMatrix& m);

ComplexMatrix ones(Index n);

}  // namespace lapflow
