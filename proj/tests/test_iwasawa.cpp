#include <random>

#include "padiclz/characters.hpp"
#include "padiclz/iwasawa.hpp"
#include "padiclz/lfun.hpp"
#include "test_util.hpp"

using namespace padiclz;

namespace {

ContextPtr ctx5() { return PadicContext::get(5, 1, 20); }

PadicScalar num(const ContextPtr& c, long n) { return PadicScalar::from_long(c, n); }

IwasawaSeries uni(const ContextPtr& c, const std::vector<long>& a, int M = 8) {
    std::vector<PadicScalar> v;
    for (long x : a) v.push_back(num(c, x));
    return IwasawaSeries::from_coefficients(v, M);
}

IwasawaSeries random_series(const ContextPtr& c, int vars, int M, std::mt19937_64& rng, int min_degree = 0) {
    IwasawaSeries F(c, vars, M);
    for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= (vars == 2 ? M - i : 0); ++j) {
            if (i + j < min_degree) continue;
            MultiIndex e = vars == 2 ? MultiIndex{i, j} : MultiIndex{i};
            F.set(e, num(c, static_cast<long>(rng() % 100000)));
        }
    return F;
}

// Exact equality of two series at the common precision.
void expect_series_eq(const IwasawaSeries& a, const IwasawaSeries& b, int slack = 0) {
    const IwasawaSeries d = a - b;
    for (const auto& [e, c] : d.terms())
        EXPECT_TRUE(c.is_zero() || c.valuation() >= c.context()->precision() - slack) << c.render();
}

}  // namespace

TEST(AugOrder, VariableHasOrderOne) {
    auto T = IwasawaSeries::variable(ctx5(), 0, 1, 8);
    auto a = aug_order(T);
    EXPECT_EQ(a.order, 1);
    EXPECT_TRUE(a.certified);
}

TEST(AugOrder, BinomialPowerOfUnit) {
    auto F = binomial_power_minus_one(ctx5(), 3, 8);
    auto lt = leading_term(F);
    EXPECT_EQ(lt.order, 1);
    EXPECT_TRUE(lt.certified);
    EXPECT_EQ(residual_valuation(lt.part.at({1}), num(ctx5(), 3)), 20);
}

TEST(AugOrder, NonUnitCoefficientStillCounts) {
    auto a = aug_order(uni(ctx5(), {0, 5, 1}));
    EXPECT_EQ(a.order, 1);
    EXPECT_TRUE(a.certified);
}

TEST(AugOrder, AllZeroIsUncertifiedLowerBound) {
    IwasawaSeries F(ctx5(), 1, 6);
    F.set({0}, PadicScalar::zero(ctx5()));
    auto a = aug_order(F);
    EXPECT_EQ(a.order, 7);
    EXPECT_FALSE(a.certified);
}

TEST(AugOrder, DeepCoefficientIsNotCertified) {
    // Valuation 18 at precision 20 leaves fewer than four digits of margin.
    auto F = uni(ctx5(), {0, 0});
    F.set({1}, num(ctx5(), 1).mul_pow_p(18));
    EXPECT_FALSE(aug_order(F).certified);
}

TEST(LeadingTerm, Univariate) {
    auto lt = leading_term(uni(ctx5(), {0, 3, 5}));
    EXPECT_EQ(lt.order, 1);
    ASSERT_EQ(lt.part.size(), 1u);
    EXPECT_EQ(residual_valuation(lt.part.at({1}), num(ctx5(), 3)), 20);
}

TEST(LeadingTerm, Bivariate) {
    auto c = ctx5();
    auto T1 = IwasawaSeries::variable(c, 0, 2, 6), T2 = IwasawaSeries::variable(c, 1, 2, 6);
    auto lt = leading_term(T1 * T2 - T1 * T1);
    EXPECT_EQ(lt.order, 2);
    ASSERT_EQ(lt.part.size(), 2u);
    EXPECT_EQ(residual_valuation(lt.part.at({1, 1}), num(c, 1)), 20);
    EXPECT_EQ(residual_valuation(lt.part.at({2, 0}), num(c, -1)), 20);
}

TEST(LeadingTerm, KubotaLeopoldtValueForChi3AtFive) {
    // -(1 - chi_3(5)) B_{1,chi_3} = -(2)(-1/3) = 2/3.
    auto K = kl_series(DirichletCharacter::kronecker(-3), 1, 5);
    auto lt = leading_term(K.series);
    EXPECT_EQ(lt.order, 0);
    EXPECT_TRUE(lt.certified);
    const auto& v = lt.part.at({0});
    EXPECT_GE(residual_valuation(v, PadicScalar::from_rational(v.context(), mpq_class(2, 3))), 16);
}

TEST(Involute, VariableExpandsGeometrically) {
    auto c = ctx5();
    auto F = involute(IwasawaSeries::variable(c, 0, 1, 8));
    for (int k = 1; k <= 8; ++k) EXPECT_EQ(residual_valuation(F.coefficient(k), num(c, k % 2 ? -1 : 1)), 20) << k;
    EXPECT_TRUE(F.coefficient(0).is_zero());
}

TEST(Involute, ConstantIsFixed) {
    auto c = ctx5();
    auto F = involute(IwasawaSeries::constant(num(c, 1), 1, 8));
    expect_series_eq(F, IwasawaSeries::constant(num(c, 1), 1, 8));
}

TEST(Involute, IsAnInvolutionAndFlipsLeadingSign) {
    std::mt19937_64 rng(5);
    auto c = ctx5();
    for (int vars : {1, 2})
        for (int s = 0; s < 4; ++s) {
            auto F = random_series(c, vars, 7, rng, s);
            expect_series_eq(involute(involute(F)), F);
            auto a = leading_term(F), b = leading_term(involute(F));
            ASSERT_EQ(a.order, b.order);
            for (const auto& [e, x] : a.part)
                EXPECT_EQ(residual_valuation(b.part.at(e), a.order % 2 ? -x : x), 20);
        }
}

TEST(Restrict, CoordinateWeights) {
    auto c = ctx5();
    auto T1 = IwasawaSeries::variable(c, 0, 2, 6), T2 = IwasawaSeries::variable(c, 1, 2, 6);
    auto T = IwasawaSeries::variable(c, 0, 1, 6);
    expect_series_eq(restrict_series(T2, 1, 0), IwasawaSeries(c, 1, 6));
    expect_series_eq(restrict_series(T1, 1, 0), T);
    expect_series_eq(restrict_series(T1 - T2, 1, 1), IwasawaSeries(c, 1, 6));
    expect_series_eq(restrict_series(T1, 2, 0), uni(c, {0, 2, 1}, 6));
}

TEST(Restrict, RejectsNonSurjection) {
    auto c = ctx5();
    auto T1 = IwasawaSeries::variable(c, 0, 2, 6);
    EXPECT_ERROR_CODE(restrict_series(T1, 5, 10), "not-a-surjection");
}

TEST(Restrict, MultiplicativeAndCommutesWithInvolution) {
    std::mt19937_64 rng(6);
    auto c = ctx5();
    for (int i = 0; i < 5; ++i) {
        auto F = random_series(c, 2, 6, rng), G = random_series(c, 2, 6, rng);
        const mpz_class a = 1 + static_cast<long>(rng() % 4), b = static_cast<long>(rng() % 7);
        expect_series_eq(restrict_series(F * G, a, b), restrict_series(F, a, b) * restrict_series(G, a, b));
        expect_series_eq(restrict_series(involute(F), a, b), involute(restrict_series(F, a, b)));
    }
}

TEST(FiniteDifference, LinearSeries) {
    auto c = ctx5();
    // Truncation 25 so that the unknown tail O(T^26) does not limit evaluations at T = O(p).
    auto F = uni(c, {0, 7}, 25);
    EXPECT_EQ(residual_valuation(finite_difference_derivative(F, 1), num(c, 35)), 20);
    auto d = finite_difference_derivative(F);
    EXPECT_GE(residual_valuation(d, chi_cyc_evaluate(leading_term(F), c)), 18);
    EXPECT_EQ(d.valuation(), 1);
}

TEST(FiniteDifference, SquareVanishesToSecondOrder) {
    auto c = ctx5();
    EXPECT_GE(finite_difference_derivative(uni(c, {0, 0, 1}, 25), 1).valuation(), 2);
}

TEST(FiniteDifference, ZeroSeries) {
    auto c = ctx5();
    EXPECT_TRUE(finite_difference_derivative(IwasawaSeries(c, 1, 10)).is_zero());
}

TEST(FiniteDifference, MatchesLeadingTermOnExceptionalZero) {
    // chi_3(7) = 1: simple exceptional zero of the KL series of chi_3 omega at p = 7.
    auto K = kl_series(DirichletCharacter::kronecker(-3), 1, 7);
    auto lt = leading_term(K.series);
    ASSERT_EQ(lt.order, 1);
    auto c = K.series.context();
    EXPECT_GE(residual_valuation(finite_difference_derivative(K.series), chi_cyc_evaluate(lt, c)), 14);
}

TEST(Properties, OrderAndLeadingTermAreMultiplicative) {
    std::mt19937_64 rng(7);
    auto c = ctx5();
    for (int i = 0; i < 20; ++i) {
        const int s = static_cast<int>(rng() % 3), t = static_cast<int>(rng() % 3);
        auto F = random_series(c, 2, 8, rng, s), G = random_series(c, 2, 8, rng, t);
        auto a = leading_term(F), b = leading_term(G), ab = leading_term(F * G);
        if (!a.certified || !b.certified) continue;
        ASSERT_EQ(ab.order, a.order + b.order);
        IwasawaSeries pa(c, 2, 8), pb(c, 2, 8);
        for (const auto& [e, x] : a.part) pa.set(e, x);
        for (const auto& [e, x] : b.part) pb.set(e, x);
        const auto prod = pa * pb;
        for (const auto& [e, x] : ab.part) EXPECT_EQ(residual_valuation(x, prod.coefficient(e)), 20);
    }
}

TEST(Properties, RingAxiomsOnTruncatedSeries) {
    std::mt19937_64 rng(8);
    auto c = PadicContext::get(7, 1, 12);
    for (int i = 0; i < 10; ++i) {
        auto F = random_series(c, 2, 5, rng), G = random_series(c, 2, 5, rng), H = random_series(c, 2, 5, rng);
        expect_series_eq((F * G) * H, F * (G * H));
        expect_series_eq(F * (G + H), F * G + F * H);
        expect_series_eq(F * G, G * F);
    }
}

TEST(Serialize, GradedLexLines) {
    auto c = PadicContext::get(5, 1, 3);
    auto T1 = IwasawaSeries::variable(c, 0, 2, 3), T2 = IwasawaSeries::variable(c, 1, 2, 3);
    auto F = T2 + T1 * T1.scaled(PadicScalar::from_long(c, 2));
    EXPECT_EQ(F.serialize(), "T1^0 T2^1 : 5^0 * (1.0.0) + O(5^3)\nT1^2 T2^0 : 5^0 * (2.0.0) + O(5^3)\n");
}
