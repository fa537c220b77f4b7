#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace huakit;

namespace {

HermitianMatrix diag(std::initializer_list<double> d) { return HermitianMatrix::diagonal(std::vector<double>(d)); }

HermitianMatrix random_psd(std::size_t n, Stream& rng) {
    const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
    return absolute_value_squared(g) + HermitianMatrix::identity(n) * 0.1;
}

}  // namespace

TEST(Matrix, ShapeChecksAndArithmetic) {
    const ComplexMatrix a{{1.0, Complex(0, 2)}, {3.0, 4.0}};
    const ComplexMatrix b = ComplexMatrix::identity(2);
    EXPECT_EQ(a * b, a);
    EXPECT_EQ((a + a)(1, 0), Complex(6.0));
    EXPECT_EQ(a.adjoint()(0, 1), Complex(3.0));
    EXPECT_EQ(a.adjoint()(1, 0), Complex(0, -2));
    EXPECT_THROW(a * ComplexMatrix(3, 3), DimensionError);
    EXPECT_THROW(a + ComplexMatrix(2, 3), DimensionError);
    EXPECT_THROW(ComplexMatrix(2, 2, std::vector<Complex>(3)), DimensionError);
    EXPECT_THROW(ComplexMatrix(1, 1, std::vector<Complex>{std::nan("")}), DomainError);
}

TEST(Matrix, HermitianRejectsAsymmetricInput) {
    EXPECT_THROW(HermitianMatrix(ComplexMatrix{{1.0, 2.0}, {0.0, 1.0}}), PreconditionError);
    EXPECT_THROW(HermitianMatrix(ComplexMatrix{{Complex(1.0, 1.0)}}), PreconditionError);
    EXPECT_THROW(HermitianMatrix(ComplexMatrix(2, 3)), DimensionError);
    const HermitianMatrix h(ComplexMatrix{{1.0, Complex(0, 1)}, {Complex(0, -1), 2.0}});
    EXPECT_EQ(h(0, 1), Complex(0, 1));
}

TEST(Spectral, DiagonalInput) {
    const SpectralDecomposition sd = spectral_decompose(diag({3.0, 1.0}));
    ASSERT_EQ(sd.eigenvalues.size(), 2u);
    EXPECT_DOUBLE_EQ(sd.eigenvalues[0], 1.0);
    EXPECT_DOUBLE_EQ(sd.eigenvalues[1], 3.0);
    // Permuted identity, up to unit phases.
    EXPECT_NEAR(std::abs(sd.eigenvectors(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(sd.eigenvectors(0, 1)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(sd.eigenvectors(0, 0)), 0.0, 1e-15);
}

TEST(Spectral, PauliX) {
    const auto ev = eigenvalues(HermitianMatrix{ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}});
    EXPECT_NEAR(ev[0], -1.0, 1e-15);
    EXPECT_NEAR(ev[1], 1.0, 1e-15);
}

TEST(Spectral, Seed42ReconstructionAt8) {
    Stream rng(SeedSpec{42, "test/spectral", 0});
    const HermitianMatrix h = oracle::gaussian_hermitian(8, rng);
    const SpectralDecomposition sd = spectral_decompose(h);
    EXPECT_LE((oracle::reconstruct(sd) - h.matrix()).frobenius_norm(), 1e-10 * h.frobenius_norm());
    EXPECT_TRUE(std::is_sorted(sd.eigenvalues.begin(), sd.eigenvalues.end()));
    const ComplexMatrix gram = adjoint_times(sd.eigenvectors, sd.eigenvectors);
    EXPECT_LE(oracle::max_entry_diff(gram, ComplexMatrix::identity(8)), 1e-12);
}

TEST(Spectral, ClosedForm2x2) {
    Stream rng(SeedSpec{5, "test/eig2", 0});
    for (int t = 0; t < 200; ++t) {
        const double a = rng.gaussian(), d = rng.gaussian();
        const Complex b = rng.complex_gaussian();
        const auto ev = eigenvalues(HermitianMatrix(ComplexMatrix{{a, b}, {std::conj(b), d}}));
        const auto [lo, hi] = oracle::eig2(a, b, d);
        EXPECT_NEAR(ev[0], lo, 1e-13 * (1 + std::abs(lo)));
        EXPECT_NEAR(ev[1], hi, 1e-13 * (1 + std::abs(hi)));
    }
}

TEST(Spectral, MinEigenvalueAgreesWithCholeskyBisection) {
    Stream rng(SeedSpec{6, "test/min-eig", 0});
    for (std::size_t n : {3u, 5u, 9u}) {
        const HermitianMatrix h = oracle::gaussian_hermitian(n, rng);
        EXPECT_NEAR(eigenvalues(h).front(), oracle::min_eigenvalue(h), 1e-10);
    }
}

TEST(Spectral, ReconstructionPropertyUpTo16) {
    for (std::size_t t = 0; t < 200; ++t) {
        Stream rng(SeedSpec{7, "test/spectral-prop", t});
        const std::size_t n = 1 + t % 16;
        const HermitianMatrix h = oracle::gaussian_hermitian(n, rng) * rng.uniform(1e-3, 1e3);
        const SpectralDecomposition sd = spectral_decompose(h);
        EXPECT_LE((oracle::reconstruct(sd) - h.matrix()).frobenius_norm(), 1e-10 * std::max(1.0, h.frobenius_norm()));
    }
}

TEST(Spectral, DegenerateAndZero) {
    const auto ev = eigenvalues(HermitianMatrix::zero(4));
    for (double v : ev) EXPECT_EQ(v, 0.0);
    const auto ev2 = eigenvalues(HermitianMatrix::identity(3) * 2.5);
    for (double v : ev2) EXPECT_DOUBLE_EQ(v, 2.5);
}

TEST(FunctionalCalculus, Examples) {
    Stream rng(SeedSpec{1, "test/fc", 0});
    const HermitianMatrix h = oracle::gaussian_hermitian(4, rng);
    EXPECT_LE(oracle::max_entry_diff(apply_function(h, [](double t) { return t; }).matrix(), h.matrix()), 1e-12);

    const HermitianMatrix sq = apply_function(diag({1.0, 2.0}), ScalarFunction::square());
    EXPECT_NEAR(sq(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(sq(1, 1).real(), 4.0, 1e-15);

    const HermitianMatrix p = random_psd(4, rng);
    const HermitianMatrix root = apply_function(p, ScalarFunction::power(0.5));
    EXPECT_LE(oracle::max_entry_diff(root * root, p.matrix()), 1e-9 * p.frobenius_norm());
}

TEST(FunctionalCalculus, SquareIsMatrixProduct) {
    for (std::size_t t = 0; t < 100; ++t) {
        Stream rng(SeedSpec{2, "test/fc-square", t});
        const std::size_t n = 2 + t % 7;
        const HermitianMatrix h = oracle::gaussian_hermitian(n, rng);
        const ComplexMatrix hh = h * h;
        EXPECT_LE(oracle::max_entry_diff(apply_function(h, ScalarFunction::square()).matrix(), hh), 1e-9 * hh.max_abs());
    }
}

TEST(FunctionalCalculus, DomainViolationsAreReported) {
    try {
        apply_function(diag({-1.0, 2.0}), ScalarFunction::log());
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_DOUBLE_EQ(e.offending_value(), -1.0);
    }
    // Tiny negative eigenvalue on a closed endpoint is clamped.
    EXPECT_NO_THROW(apply_function(diag({-1e-14, 1.0}), ScalarFunction::power(0.5)));
    EXPECT_THROW(apply_function(diag({-1e-6, 1.0}), ScalarFunction::power(0.5)), DomainError);
    // Open endpoints must be cleared.
    EXPECT_THROW(apply_function(diag({1e-13, 1.0}), ScalarFunction::inverse()), DomainError);
}

TEST(LoewnerGap, Examples) {
    const OrderReport a = loewner_gap(HermitianMatrix::identity(2) * 2.0, HermitianMatrix::identity(2));
    EXPECT_NEAR(a.gap, 1.0, 1e-15);
    EXPECT_EQ(a.verdict, Verdict::Holds);

    const HermitianMatrix l = diag({0.3, 1.7});
    EXPECT_EQ(loewner_gap(l, l).verdict, Verdict::Equality);
    EXPECT_NEAR(loewner_gap(l, l).gap, 0.0, 1e-15);

    const OrderReport f = loewner_gap(diag({1.0, 0.0}), diag({0.0, 1.0}));
    EXPECT_NEAR(f.gap, -1.0, 1e-15);
    EXPECT_EQ(f.verdict, Verdict::Fails);

    const TolerancePolicy tol;
    const double expected_threshold = -(tol.rel * (2.0 + 1.0) + tol.abs);
    EXPECT_DOUBLE_EQ(a.threshold, expected_threshold);
    EXPECT_THROW(loewner_gap(HermitianMatrix::identity(2), HermitianMatrix::identity(3)), DimensionError);
}

TEST(LoewnerGap, MonotoneConsistency) {
    for (std::size_t t = 0; t < 200; ++t) {
        Stream rng(SeedSpec{3, "test/loewner-swap", t});
        const std::size_t n = 1 + t % 6;
        const HermitianMatrix r = oracle::gaussian_hermitian(n, rng);
        const HermitianMatrix l = r + random_psd(n, rng);
        const OrderReport fwd = loewner_gap(l, r);
        ASSERT_NE(fwd.verdict, Verdict::Fails);
        const OrderReport back = loewner_gap(r, l);
        EXPECT_LE(back.gap, -fwd.gap - 2.0 * fwd.threshold);
    }
}

TEST(LoewnerGap, CongruencePreservesOrder) {
    for (std::size_t t = 0; t < 200; ++t) {
        Stream rng(SeedSpec{4, "test/congruence", t});
        const std::size_t n = 1 + t % 6;
        const HermitianMatrix p = absolute_value_squared(random_gaussian_matrix(n, n, rng));
        const ComplexMatrix x = random_gaussian_matrix(n, 1 + t % 4, rng);
        const HermitianMatrix c = p.congruence(x);
        EXPECT_GE(eigenvalues(c).front(), -1e-12 * std::max(1.0, c.frobenius_norm()));
    }
}

TEST(Norms, OperatorNorm) {
    EXPECT_NEAR(operator_norm(ComplexMatrix::identity(5)), 1.0, 1e-15);
    EXPECT_NEAR(operator_norm(HermitianMatrix::diagonal(std::vector<double>{3.0, -4.0}).matrix()), 4.0, 1e-14);
    for (std::size_t t = 0; t < 100; ++t) {
        Stream rng(SeedSpec{8, "test/rank-one", t});
        const ComplexMatrix u = random_gaussian_matrix(1 + t % 5, 1, rng);
        const ComplexMatrix v = random_gaussian_matrix(1 + t % 7, 1, rng);
        const double expected = u.frobenius_norm() * v.frobenius_norm();
        EXPECT_NEAR(operator_norm(u * v.adjoint()), expected, 1e-10 * std::max(1.0, expected));
    }
}

TEST(Norms, AbsoluteValueSquared) {
    EXPECT_EQ(absolute_value_squared(ComplexMatrix::identity(3)).matrix(), ComplexMatrix::identity(3));
    const ComplexMatrix col{{1.0}, {Complex(0, 1)}};
    const HermitianMatrix a = absolute_value_squared(col);
    ASSERT_EQ(a.dim(), 1u);
    EXPECT_NEAR(a(0, 0).real(), 2.0, 1e-15);
    EXPECT_EQ(absolute_value_squared(ComplexMatrix(3, 2)).matrix(), ComplexMatrix(2, 2));
}

TEST(Norms, SqrtAndInverse) {
    const HermitianMatrix i2 = HermitianMatrix::identity(2);
    EXPECT_LE(oracle::max_entry_diff(positive_sqrt(i2).matrix(), i2.matrix()), 1e-15);
    EXPECT_LE(oracle::max_entry_diff(positive_inverse(i2).matrix(), i2.matrix()), 1e-15);

    const HermitianMatrix d = diag({4.0, 9.0});
    EXPECT_NEAR(positive_sqrt(d)(1, 1).real(), 3.0, 1e-14);
    EXPECT_NEAR(positive_inverse(d)(0, 0).real(), 0.25, 1e-15);
    EXPECT_NEAR(positive_inverse(d)(1, 1).real(), 1.0 / 9.0, 1e-15);

    Stream rng(SeedSpec{9, "test/inverse", 0});
    for (int t = 0; t < 50; ++t) {
        const HermitianMatrix p = random_psd(4, rng);
        EXPECT_LE(oracle::max_entry_diff(p * positive_inverse(p), ComplexMatrix::identity(4)), 1e-9);
        const HermitianMatrix r = positive_sqrt(p);
        EXPECT_LE(oracle::max_entry_diff(r * r, p.matrix()), 1e-9 * p.frobenius_norm());
        const HermitianMatrix is = positive_inverse_sqrt(p);
        EXPECT_LE(oracle::max_entry_diff(is * p * is, ComplexMatrix::identity(4)), 1e-9);
    }
    EXPECT_THROW(positive_inverse(diag({1.0, 0.0})), SingularityError);
    EXPECT_THROW(positive_sqrt(diag({1.0, -0.5})), DomainError);
}

TEST(Tolerance, RejectsNegativeOrNonFinite) {
    EXPECT_THROW(TolerancePolicy(-1.0, 0.0), PreconditionError);
    EXPECT_THROW(TolerancePolicy(0.0, std::numeric_limits<double>::infinity()), PreconditionError);
    EXPECT_NO_THROW(TolerancePolicy(0.0, 0.0));
}
