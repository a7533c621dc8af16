#include <cmath>

#include "padiclz/lfun.hpp"
#include "padiclz/numtheory.hpp"
#include "test_util.hpp"

using namespace padiclz;

namespace {

// L_p(1-n, chi omega) = -B_{n,phi}/n for phi = chi omega^{1-n} viewed modulo F = f p: the
// imprimitive Bernoulli number already carries the Euler factor at p.
PadicScalar kl_value_oracle(const DirichletCharacter& chi, long p, int n, int N) {
    const long f = chi.modulus(), F = f * p;
    const int guard = 4;
    auto ctx = chi.padic_value(1, p, N + guard).context();
    PadicScalar B = PadicScalar::zero(ctx);
    for (long a = 1; a <= F; ++a) {
        if (nt::gcd(a, F) != 1) continue;
        PadicScalar w = teichmuller(ctx, a % p).pow(p - 1 + (1 - n) % (p - 1));
        PadicScalar v = chi.padic_value(a % f, p, N + guard).to_context(ctx) * w;
        const mpq_class bn = nt::bernoulli_poly(n, mpq_class(a, F)) * mpq_class(nt::ipow(F, n - 1));
        B += v * PadicScalar::from_rational(ctx, bn);
    }
    PadicScalar r = -B / PadicScalar::from_long(ctx, n);
    return r.to_context(ctx->with_precision(N));
}

}  // namespace

TEST(Arch, OddValues) {
    auto l3 = arch_value_at_zero(DirichletCharacter::kronecker(-3));
    EXPECT_EQ(l3.order, 0);
    EXPECT_EQ(l3.exact.rational(), mpq_class(1, 3));
    auto l4 = arch_value_at_zero(DirichletCharacter::kronecker(-4));
    EXPECT_EQ(l4.exact.rational(), mpq_class(1, 2));
    EXPECT_NEAR(static_cast<double>(l4.value.real()), 0.5, 1e-14);
}

TEST(Arch, EvenDerivativesAreRegulators) {
    // L'(0, chi_D) = h log(eps) for real quadratic fields of class number one.
    auto l12 = arch_value_at_zero(DirichletCharacter::kronecker(12));
    EXPECT_EQ(l12.order, 1);
    EXPECT_NEAR(static_cast<double>(l12.value.real()), std::log(2 + std::sqrt(3.0)), 1e-12);
    EXPECT_LT(l12.error, 1e-10L);
    auto l5 = arch_value_at_zero(DirichletCharacter::kronecker(5));
    EXPECT_NEAR(static_cast<double>(l5.value.real()), std::log((1 + std::sqrt(5.0)) / 2), 1e-12);
    auto l8 = arch_value_at_zero(DirichletCharacter::kronecker(8));
    EXPECT_NEAR(static_cast<double>(l8.value.real()), std::log(1 + std::sqrt(2.0)), 1e-12);
}

TEST(Arch, TrivialCharacterRejected) {
    EXPECT_ERROR_CODE(arch_value_at_zero(DirichletCharacter::trivial(5)), "pole-at-one-not-modeled");
}

TEST(Arch, BaseChangeLeadingTerm) {
    auto t = arch_leading_term_base_change(HeckeSetup::make(-4, 13, DirichletCharacter::kronecker(-3)));
    EXPECT_EQ(t.order, 1);
    EXPECT_NEAR(static_cast<double>(t.value.real()), std::log(2 + std::sqrt(3.0)) / 3, 1e-12);
}

TEST(KL, ValueAtZeroForChi3AtFive) {
    auto K = kl_series(DirichletCharacter::kronecker(-3), 1, 5);
    auto v = K.value_at_one_minus(1);
    EXPECT_GE(residual_valuation(v, PadicScalar::from_rational(v.context(), mpq_class(2, 3))), 16);
    EXPECT_EQ(aug_order(K.series).order, 0);
}

TEST(KL, TrivialZeroAtSeven) {
    // chi_3(7) = 1 kills the Euler factor at s = 0.
    auto K = kl_series(DirichletCharacter::kronecker(-3), 1, 7);
    EXPECT_GE(K.value_at_one_minus(1).valuation(), 16);
    auto a = aug_order(K.series);
    EXPECT_GE(a.order, 1);
    EXPECT_TRUE(a.certified);
}

TEST(KL, InterpolationAgainstDirectBernoulliSums) {
    for (long D : {-3L, -4L})
        for (long p : {5L, 7L}) {
            auto chi = DirichletCharacter::kronecker(D);
            auto K = kl_series(chi, 1, p);
            for (int n = 1; n <= 4; ++n) {
                auto oracle = kl_value_oracle(chi, p, n, 20);
                EXPECT_GE(residual_valuation(K.value_at_one_minus(n), oracle), 16) << D << ' ' << p << ' ' << n;
                EXPECT_GE(residual_valuation(kl_interpolation_value(chi, 1, p, n, 20), oracle), 18);
            }
        }
}

TEST(KL, ParityMismatchRejected) {
    EXPECT_ERROR_CODE(kl_series(DirichletCharacter::kronecker(-3), 0, 5), "odd-branch");
    auto s = HeckeSetup::make(-4, 13, DirichletCharacter::kronecker(-3));
    EXPECT_ERROR_CODE(gross_branches(s, GrossConvention{false, false}), "odd-branch");
}

TEST(Katz, OrderMatchesExceptionalCount) {
    auto K13 = katz_cyclotomic(HeckeSetup::make(-4, 13, DirichletCharacter::kronecker(-3)));
    auto a = aug_order(K13.series);
    EXPECT_EQ(a.order, 1);
    EXPECT_TRUE(a.certified);
    EXPECT_EQ(K13.period, "c_period");
    auto K5 = katz_cyclotomic(HeckeSetup::make(-4, 5, DirichletCharacter::kronecker(-3)));
    auto b = aug_order(K5.series);
    EXPECT_EQ(b.order, 0);
    EXPECT_TRUE(b.certified);
}

TEST(Katz, FiniteDifferenceMatchesLeadingTerm) {
    auto K = katz_cyclotomic(HeckeSetup::make(-4, 13, DirichletCharacter::kronecker(-3)));
    auto lt = leading_term(K.series);
    ASSERT_EQ(lt.order, 1);
    auto ctx = K.series.context();
    auto d = finite_difference_derivative(K.series);
    EXPECT_GE(residual_valuation(d, chi_cyc_evaluate(lt, ctx)), 14);
}

TEST(Reflection, IsAnInvolution) {
    auto ctx = PadicContext::get(7, 1, 20);
    std::vector<PadicScalar> c;
    for (long k = 0; k <= 12; ++k) c.push_back(PadicScalar::from_long(ctx, 3 * k * k + 1));
    auto F = IwasawaSeries::from_coefficients(c, 12);
    auto RR = reflect_s_to_one_minus_s(reflect_s_to_one_minus_s(F));
    // Low coefficients keep most of their digits; the truncated tail eats the rest.
    for (int i = 0; i <= 4; ++i) EXPECT_GE(residual_valuation(RR.coefficient(i), F.coefficient(i)), 8) << i;
}

TEST(Reflection, ValueAtZeroIsValueAtP) {
    // The reflected series at T = 0 is the original at T = p, i.e. s = 1 maps to s = 0.
    auto K = kl_series(DirichletCharacter::kronecker(-4), 1, 5);
    auto R = reflect_s_to_one_minus_s(K.series);
    auto ctx = K.series.context();
    EXPECT_GE(residual_valuation(R.coefficient(0), K.series.evaluate(PadicScalar::from_long(ctx, 5))), 16);
}
