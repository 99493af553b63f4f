#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "lapflow/errors.hpp"
#include "lapflow/numkernel.hpp"

using namespace lapflow;
using lapflow::testkit::Rng;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST(Eig, TwoByTwoLaplacianSpectrum) {
    const auto dec = eig(mat2(1, -1, -1, 1));
    ASSERT_EQ(dec.size(), 2);
    EXPECT_NEAR(std::abs(dec.eigenvalues[0]), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(dec.eigenvalues[1] - Complex(2.0)), 0.0, 1e-14);
    EXPECT_FALSE(dec.is_defective);
    // Null vector (1,1)/sqrt(2), phase fixed to real positive.
    EXPECT_NEAR(std::abs(dec.right_vectors(0, 0) - Complex(M_SQRT1_2)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(dec.right_vectors(1, 0) - Complex(M_SQRT1_2)), 0.0, 1e-14);
}

TEST(Eig, RotationHasConjugatePair) {
    const auto dec = eig(mat2(0, -1, 1, 0));
    ASSERT_EQ(dec.size(), 2);
    EXPECT_NEAR(std::abs(dec.eigenvalues[0] - Complex(0, -1)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(dec.eigenvalues[1] - Complex(0, 1)), 0.0, 1e-14);
}

TEST(Eig, JordanBlockIsDefective) {
    const auto dec = eig(mat2(0, 1, 0, 0));
    EXPECT_TRUE(dec.is_defective);
    EXPECT_LT(dec.basis_rcond, kDefectiveRcond);
}

TEST(Eig, RejectsNonSquareAndNonFinite) {
    EXPECT_THROW(eig(ComplexMatrix::Zero(2, 3)), ContractError);
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(0, 1) = Complex(std::nan(""), 0.0);
    EXPECT_THROW(eig(m), ContractError);
}

TEST(EigProperty, ResidualsAndTrace) {
    Rng rng(11);
    for (int k = 0; k < 100; ++k) {
        const Index n = 1 + rng.index(20);
        const ComplexMatrix m = testkit::random_matrix(rng, n, n);
        const auto dec = eig(m);
        ASSERT_FALSE(dec.is_defective);
        for (Index i = 0; i < n; ++i) {
            const Complex lambda = dec.eigenvalues[static_cast<std::size_t>(i)];
            const ComplexVector x = dec.right_vectors.col(i);
            const ComplexVector z = dec.left_vectors.col(i);
            EXPECT_LE((m * x - lambda * x).norm(), kEigTol * norm(m));
            EXPECT_LE((z.adjoint() * m - lambda * z.adjoint()).norm(), kEigTol * norm(m));
            EXPECT_NEAR(x.norm(), 1.0, 1e-12);
        }
        Complex sum = 0.0;
        for (const Complex v : dec.eigenvalues) sum += v;
        EXPECT_LE(std::abs(sum - m.trace()), 1e-8 * std::max(1.0, std::abs(m.trace())) + 1e-8 * norm(m));
    }
}

TEST(EigProperty, SpectrumIsSortedByModulus) {
    Rng rng(12);
    const ComplexMatrix m = testkit::random_matrix(rng, 12, 12);
    const auto dec = eig(m);
    for (std::size_t i = 1; i < dec.eigenvalues.size(); ++i)
        EXPECT_LE(std::abs(dec.eigenvalues[i - 1]), std::abs(dec.eigenvalues[i]) + 1e-9 * std::abs(dec.eigenvalues.back()));
}

TEST(FixPhase, LargestEntryBecomesRealPositive) {
    ComplexVector v(3);
    v << Complex(0.0, 1.0), Complex(0.0, -3.0), Complex(1.0, 1.0);
    const ComplexVector w = fix_phase(v);
    EXPECT_NEAR(w.norm(), 1.0, 1e-15);
    EXPECT_NEAR(w(1).imag(), 0.0, 1e-15);
    EXPECT_GT(w(1).real(), 0.0);
    EXPECT_NEAR(std::abs(fix_phase(ComplexVector::Zero(2)).norm()), 0.0, 0.0);
}

TEST(SpectralProjector, IsIdempotentAndSumsToIdentity) {
    Rng rng(13);
    const ComplexMatrix m = testkit::random_matrix(rng, 6, 6);
    const auto dec = eig(m);
    ComplexMatrix total = ComplexMatrix::Zero(6, 6);
    for (Index i = 0; i < 6; ++i) {
        const std::vector<Index> one{i};
        const ComplexMatrix p = spectral_projector(dec, one);
        EXPECT_LE(norm(p * p - p), 1e-8 * norm(p));
        total += p;
    }
    EXPECT_LE(norm(total - ComplexMatrix::Identity(6, 6)), 1e-8);
}

TEST(Pinv, ScalarAndZero) {
    ComplexMatrix m(1, 1);
    m << Complex(0.0, 2.0);
    EXPECT_NEAR(std::abs(pinv(m).matrix(0, 0) - Complex(0.0, -0.5)), 0.0, 1e-15);
    const auto z = pinv(ComplexMatrix::Zero(3, 2));
    EXPECT_EQ(z.rank, 0);
    EXPECT_EQ(z.matrix.rows(), 2);
    EXPECT_EQ(z.matrix.cols(), 3);
    EXPECT_EQ(norm(z.matrix), 0.0);
}

TEST(Pinv, TwoNodeLaplacian) {
    // L^+ = L / 4 for L = [[1,-1],[-1,1]].
    const auto p = pinv(mat2(1, -1, -1, 1));
    EXPECT_EQ(p.rank, 1);
    EXPECT_LE(norm(p.matrix - mat2(0.25, -0.25, -0.25, 0.25)), 1e-15);
}

TEST(PinvProperty, PenroseRelationsIncludingRankDeficient) {
    Rng rng(14);
    for (int k = 0; k < 200; ++k) {
        const Index rows = 1 + rng.index(20), cols = 1 + rng.index(20);
        const Index rank = 1 + rng.index(std::min(rows, cols));
        const ComplexMatrix m =
            k % 2 ? testkit::low_rank_matrix(rng, rows, cols, rank) : testkit::random_matrix(rng, rows, cols);
        const auto p = pinv(m);
        const auto res = penrose_residuals(m, p.matrix);
        EXPECT_LE(res.max(), kPinvTol) << "matrix " << k << " fails " << res.first_failure(kPinvTol);
        if (k % 2) EXPECT_EQ(p.rank, rank);
    }
}

TEST(PenroseResiduals, NamesFirstFailure) {
    const ComplexMatrix m = mat2(1, 0, 0, 0);
    const auto res = penrose_residuals(m, ComplexMatrix::Identity(2, 2));
    EXPECT_EQ(res.first_failure(1e-8), "P M P = P");
    EXPECT_EQ(penrose_residuals(m, m).first_failure(1e-8), "");
}

TEST(Expm, ClosedForms) {
    // e^{-Lt} for L = [[1,-1],[-1,1]]: ((1 + e^{-2t})/2, (1 - e^{-2t})/2).
    const ComplexMatrix e = expm(-mat2(1, -1, -1, 1));
    EXPECT_NEAR(e(0, 0).real(), (1.0 + std::exp(-2.0)) / 2.0, 1e-14);
    EXPECT_NEAR(e(0, 1).real(), (1.0 - std::exp(-2.0)) / 2.0, 1e-14);
    EXPECT_NEAR(std::abs(expm(ComplexMatrix::Zero(3, 3)).trace() - Complex(3.0)), 0.0, 0.0);
    // Rotation generator.
    const ComplexMatrix r = expm(mat2(0, -1, 1, 0) * 0.7);
    EXPECT_NEAR(r(0, 0).real(), std::cos(0.7), 1e-14);
    EXPECT_NEAR(r(1, 0).real(), std::sin(0.7), 1e-14);
}

TEST(Expm, OverflowIsSaturation) {
    EXPECT_THROW(expm(mat2(800, 0, 0, 0)), SaturationError);
}

TEST(ExpmProperty, AgreesWithTaylorOracle) {
    Rng rng(15);
    for (int k = 0; k < 100; ++k) {
        const Index n = 1 + rng.index(12);
        const ComplexMatrix m = testkit::random_matrix(rng, n, n) * rng.uniform(0.05, 1.5);
        const ComplexMatrix ref = testkit::taylor_expm(m);
        EXPECT_LE(norm(expm(m) - ref), 1e-11 * std::max(1.0, norm(ref)));
    }
}

TEST(ExpmProperty, Semigroup) {
    Rng rng(16);
    for (int k = 0; k < 100; ++k) {
        const Index n = 1 + rng.index(10);
        const ComplexMatrix m = testkit::random_matrix(rng, n, n);
        const double s = rng.uniform(0.01, 2.0), t = rng.uniform(0.01, 2.0);
        const ComplexMatrix whole = expm(m * (s + t));
        EXPECT_LE(norm(whole - expm(m * s) * expm(m * t)), 1e-8 * norm(whole));
    }
}

TEST(ExpmProperty, DeterminantIsExpTrace) {
    Rng rng(17);
    for (int k = 0; k < 50; ++k) {
        const Index n = 1 + rng.index(8);
        const ComplexMatrix m = testkit::random_matrix(rng, n, n);
        const Complex det = expm(m).determinant();
        const Complex ref = std::exp(m.trace());
        EXPECT_LE(std::abs(det - ref), 1e-10 * std::abs(ref));
    }
}

TEST(Solve, SolvesAndRejectsSingular) {
    const ComplexMatrix m = mat2(2, 1, 1, 3);
    ComplexMatrix b(2, 1);
    b << 3, 5;
    const auto sol = solve(m, b);
    EXPECT_LE(norm(m * sol.x - b), 1e-14);
    EXPECT_GT(sol.rcond, 0.1);
    EXPECT_THROW(solve(mat2(1, 1, 1, 1), b), NumericalError);
}

TEST(Positivity, RealOnlyVersusBothParts) {
    const ComplexMatrix m = mat2(Complex(1, -1), 1, 1, 1);
    EXPECT_TRUE(is_real_positive(m));
    EXPECT_FALSE(is_nonnegative(m));
    EXPECT_TRUE(is_nonnegative(ones(3)));
    EXPECT_FALSE(is_real_positive(mat2(1, 0, 1, 1)));
}
