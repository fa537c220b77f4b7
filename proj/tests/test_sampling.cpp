#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace huakit;

namespace {

double max_eigenvalue(const HermitianMatrix& h) { return -oracle::min_eigenvalue(h * -1.0); }

HermitianMatrix gram_sum(const std::vector<ComplexMatrix>& es) {
    ComplexMatrix s(es.front().cols(), es.front().cols());
    for (const auto& e : es) s += e.adjoint() * e;
    return HermitianMatrix::symmetrize(s);
}

}  // namespace

TEST(Stream, DeterministicAndLabelSeparated) {
    Stream a(SeedSpec{42, "x", 3}), b(SeedSpec{42, "x", 3});
    Stream c(SeedSpec{42, "y", 3}), d(SeedSpec{42, "x", 4});
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        EXPECT_EQ(va, b.next_u64());
        seen.insert(va);
        seen.insert(c.next_u64());
        seen.insert(d.next_u64());
    }
    EXPECT_EQ(seen.size(), 300u);
}

TEST(Stream, UniformAndGaussianMoments) {
    Stream rng(SeedSpec{1, "test/moments", 0});
    constexpr int n = 200000;
    double su = 0, sg = 0, sg2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double g = rng.gaussian();
        sg += g;
        sg2 += g * g;
    }
    EXPECT_NEAR(su / n, 0.5, 0.005);
    EXPECT_NEAR(sg / n, 0.0, 0.01);
    EXPECT_NEAR(sg2 / n, 1.0, 0.02);
}

TEST(RandomUnitary, IsUnitary) {
    for (std::size_t n : {1, 2, 4, 8}) {
        Stream rng(SeedSpec{2, "test/unitary", n});
        const ComplexMatrix u = random_unitary(n, rng);
        EXPECT_LE(oracle::max_entry_diff(u.adjoint() * u, ComplexMatrix::identity(n)), 1e-12);
    }
}

TEST(RandomHermitian, DegenerateIntervalGivesScalar) {
    Stream rng(SeedSpec{3, "test/degenerate", 0});
    const HermitianMatrix h = random_hermitian_in_interval(4, Interval::closed(1.5, 1.5), rng);
    EXPECT_LE(oracle::max_entry_diff(h.matrix(), ComplexMatrix::identity(4) * 1.5), 1e-12);
}

TEST(RandomHermitian, SpectrumInsideInterval) {
    for (std::size_t t = 0; t < 500; ++t) {
        const HermitianMatrix h = random_hermitian_in_interval(4, Interval::closed(0, 1), SeedSpec{2, "test/in-interval", t});
        EXPECT_GE(oracle::min_eigenvalue(h), -1e-12);
        EXPECT_LE(max_eigenvalue(h), 1.0 + 1e-12);
        EXPECT_LE(oracle::max_entry_diff(h.matrix(), h.matrix().adjoint()), 0.0);
    }
}

TEST(RandomHermitian, SameSeedSameMatrix) {
    const SeedSpec s{17, "test/determinism", 5};
    const auto a = random_hermitian_in_interval(5, Interval::closed(-1, 2), s);
    const auto b = random_hermitian_in_interval(5, Interval::closed(-1, 2), s);
    EXPECT_EQ(a.matrix(), b.matrix());
    const auto c = random_hermitian_in_interval(5, Interval::closed(-1, 2), SeedSpec{17, "test/determinism", 6});
    EXPECT_NE(a.matrix(), c.matrix());
}

TEST(RandomHermitian, UnboundedIntervalRejected) {
    Stream rng(SeedSpec{4, "test/unbounded", 0});
    EXPECT_THROW(random_hermitian_in_interval(2, Interval::open(0, std::numeric_limits<double>::infinity()), rng),
                 PreconditionError);
}

TEST(ContractionFamily, SingleEqualIsUnitary) {
    for (std::size_t t = 0; t < 50; ++t) {
        const auto es = random_contraction_family(3, 1, ContractionMode::EqualIdentity, SeedSpec{5, "test/unitary-e", t});
        EXPECT_LE(oracle::max_entry_diff(es[0].adjoint() * es[0], ComplexMatrix::identity(3)), 1e-10);
        EXPECT_LE(oracle::max_entry_diff(es[0] * es[0].adjoint(), ComplexMatrix::identity(3)), 1e-10);
    }
}

TEST(ContractionFamily, ModesRespectBounds) {
    for (std::size_t t = 0; t < 200; ++t) {
        const std::size_t n = 1 + t % 4, count = 1 + t % 3;
        const auto eq = random_contraction_family(n, count, ContractionMode::EqualIdentity, SeedSpec{4, "test/eq", t});
        EXPECT_LE(oracle::max_entry_diff(gram_sum(eq).matrix(), ComplexMatrix::identity(n)), 1e-10);
        const auto leq = random_contraction_family(n, count, ContractionMode::AtMostIdentity, SeedSpec{4, "test/leq", t});
        EXPECT_LE(max_eigenvalue(gram_sum(leq)), 1.0 + 1e-10);
        const auto strict = random_contraction_family(n, count, ContractionMode::Strict, SeedSpec{4, "test/strict", t});
        EXPECT_LT(max_eigenvalue(gram_sum(strict)), 1.0 - 1e-3);
    }
}

TEST(ContractionFamily, ZeroCountRejected) {
    EXPECT_THROW(random_contraction_family(2, 0, ContractionMode::EqualIdentity, SeedSpec{}), PreconditionError);
}

TEST(Generators, ScalarHuaShape) {
    const auto inst = std::get<HuaScalarInstance>(
        random_admissible_instance(InequalityId::ScalarHua, InstanceParams{.dim = 3}, SeedSpec{0, "test/gen", 0}));
    EXPECT_EQ(inst.xs.size(), 3u);
    EXPECT_GT(inst.delta, 0.0);
    EXPECT_GT(inst.alpha, 0.0);
}

TEST(Generators, OperatorHuaResidualInsideWindow) {
    for (std::size_t t = 0; t < 200; ++t) {
        const InstanceParams params{.dim = 4, .function = ScalarFunction::inverse(), .terms = 2};
        const auto inst = std::get<ForcedOperatorHua>(
                              random_admissible_instance(InequalityId::OperatorHua, params, SeedSpec{6, "test/gen-op", t}))
                              .data;
        ASSERT_EQ(inst.as.size(), 2u);
        HermitianMatrix r = inst.b;
        for (std::size_t i = 0; i < 2; ++i) r = r - inst.as[i].congruence(inst.cs[i]);
        EXPECT_GT(oracle::min_eigenvalue(r), 0.0);
        for (const auto& a : inst.as) EXPECT_GT(oracle::min_eigenvalue(a), 0.0);
    }
}

TEST(Generators, DiagonalCentralElementIsNotScalar) {
    std::size_t nonscalar = 0;
    for (std::size_t t = 0; t < 20; ++t) {
        const auto inst = std::get<ModuleHuaInstance>(random_admissible_instance(
            InequalityId::ModuleHua, InstanceParams{.dim = 3, .model = ModelKind::Diagonal}, SeedSpec{7, "test/gen-c", t}));
        const auto d = inst.c.element().diagonal_payload();
        if (std::abs(d[0] - d[1]) > 1e-6 || std::abs(d[1] - d[2]) > 1e-6) ++nonscalar;
    }
    EXPECT_EQ(nonscalar, 20u);
}

TEST(Generators, DrawsAreAlwaysAdmissible) {
    // Every generator output passes its verifier's preconditions.
    struct Case {
        InequalityId id;
        InstanceParams params;
    };
    const std::vector<Case> cases = {
        {InequalityId::ScalarHua, {}},
        {InequalityId::WangHua, {.p = 0.5}},
        {InequalityId::WangHua, {.p = 3.0}},
        {InequalityId::InnerProductHua, {}},
        {InequalityId::InnerProductHua, {.alternate_form = true}},
        {InequalityId::ModuleHua, {.model = ModelKind::Diagonal}},
        {InequalityId::ModuleHua, {.function = ScalarFunction::exp()}},
        {InequalityId::NormHua, {.alternate_form = true}},
        {InequalityId::NormHua, {.model = ModelKind::Diagonal}},
        {InequalityId::ModuleJensen, {.function = ScalarFunction::power(1.5)}},
        {InequalityId::ModuleHuaJensen, {.model = ModelKind::Diagonal}},
        {InequalityId::OperatorHua, {.function = ScalarFunction::log()}},
        {InequalityId::OperatorHuaCorollary, {.corollary = CorollaryVariant::power(-0.5)}},
        {InequalityId::OperatorHuaCorollary, {.corollary = CorollaryVariant::log()}},
        {InequalityId::PecaricHua, {.function = ScalarFunction::exp()}},
        {InequalityId::HpjJensen, {.function = ScalarFunction::inverse(), .mode = ContractionMode::EqualIdentity}},
        {InequalityId::HpjJensen, {.mode = ContractionMode::Strict}},
    };
    for (const Case& c : cases) {
        std::size_t errors = 0, fails = 0;
        for (std::size_t t = 0; t < 10000; ++t) {
            InstanceParams p = c.params;
            p.dim = 1 + t % 3;
            try {
                if (verify(random_admissible_instance(c.id, p, SeedSpec{8, "test/admissible", t})).verdict == Verdict::Fails)
                    ++fails;
            } catch (const Error&) {
                ++errors;
            }
        }
        EXPECT_EQ(errors, 0u) << to_string(c.id);
        EXPECT_EQ(fails, 0u) << to_string(c.id);
    }
}

TEST(Generators, Preconditions) {
    EXPECT_THROW(random_admissible_instance(InequalityId::ScalarHua, InstanceParams{.dim = 0}, SeedSpec{}), PreconditionError);
    EXPECT_THROW(random_admissible_instance(InequalityId::HpjJensen, InstanceParams{.function = ScalarFunction::inverse()},
                                            SeedSpec{}),
                 PreconditionError);
    EXPECT_THROW(parse_inequality("nope"), LookupError);
}
