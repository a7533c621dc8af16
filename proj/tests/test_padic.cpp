#include <random>

#include "padiclz/numtheory.hpp"
#include "padiclz/padic.hpp"
#include "test_util.hpp"

using namespace padiclz;

namespace {

// Exact partial sums of a rational series reduced modulo p^k; the oracle for log and exp digits.
mpz_class reduce_rational(const mpq_class& q, long p, int k) {
    const mpz_class m = nt::ipow(p, k);
    mpz_class inv;
    mpz_class den = q.get_den();
    EXPECT_NE(mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()), 0);
    mpz_class r = q.get_num() * inv % m;
    if (r < 0) r += m;
    return r;
}

PadicScalar random_scalar(const ContextPtr& ctx, std::mt19937_64& rng, bool allow_zero = true) {
    const mpz_class m = ctx->ppow(ctx->precision());
    Poly c(ctx->degree());
    for (auto& x : c) {
        x = static_cast<unsigned long>(rng() % 1000003);
        x = x * x * x % m;
    }
    auto v = PadicScalar::from_vector(ctx, c);
    if (!allow_zero && v.is_zero()) return PadicScalar::one(ctx);
    return v;
}

}  // namespace

TEST(Teichmuller, FixedPointOne) {
    auto ctx = PadicContext::get(5, 1, 4);
    auto t = teichmuller(ctx, 1);
    EXPECT_EQ(t.to_integer(), 1);
    EXPECT_EQ(t.precision(), 4);
}

TEST(Teichmuller, HenselLiftOfTwoModTwentyFive) {
    auto ctx = PadicContext::get(5, 1, 2);
    // Newton iteration for x^4 - 1 from x = 2 over Z/25.
    mpz_class x = 2;
    for (int i = 0; i < 4; ++i) {
        mpz_class f = x * x * x * x - 1, df = 4 * x * x * x, inv;
        mpz_class m = 25;
        mpz_invert(inv.get_mpz_t(), df.get_mpz_t(), m.get_mpz_t());
        x = ((x - f * inv) % 25 + 25) % 25;
    }
    EXPECT_EQ(x, 7);
    EXPECT_EQ(teichmuller(ctx, 2).to_integer(), 7);
}

TEST(Teichmuller, MinusOneIsItsOwnLift) {
    for (long p : {5L, 7L, 13L}) {
        auto ctx = PadicContext::get(p, 1, 20);
        EXPECT_EQ(residual_valuation(teichmuller(ctx, p - 1), PadicScalar::from_long(ctx, -1)), 20);
    }
}

TEST(Teichmuller, RootOfUnityOrder) {
    auto ctx = PadicContext::get(7, 2, 12);
    auto g = PadicScalar::generator(ctx);
    auto t = teichmuller(g + PadicScalar::from_long(ctx, 3));
    EXPECT_EQ(residual_valuation(t.pow(48), PadicScalar::one(ctx)), 12);
}

TEST(Teichmuller, NonUnitRejected) {
    auto ctx = PadicContext::get(5, 1, 10);
    EXPECT_ERROR_CODE(teichmuller(ctx, 10), "teichmuller-of-nonunit");
}

TEST(Log, LogOfPIsZero) {
    for (long p : {5L, 7L, 13L}) {
        auto ctx = PadicContext::get(p, 1, 20);
        auto l = log_iwasawa(PadicScalar::from_long(ctx, p));
        EXPECT_TRUE(l.is_zero());
    }
}

TEST(Log, TorsionMapsToZero) {
    auto ctx = PadicContext::get(13, 1, 20);
    for (long a = 1; a < 13; ++a) EXPECT_TRUE(log_iwasawa(teichmuller(ctx, a)).is_zero()) << a;
}

TEST(Log, LogOfSixModFiveToTheFour) {
    auto ctx = PadicContext::get(5, 1, 4);
    mpq_class s = 0, pw = 1;
    for (int n = 1; n <= 24; ++n) {
        pw *= 5;
        s += (n % 2 ? 1 : -1) * pw / n;
    }
    const mpz_class oracle = reduce_rational(s, 5, 4);
    EXPECT_EQ(oracle, 555);  // 5 + 2*25 + 4*125
    EXPECT_EQ(log_iwasawa(PadicScalar::from_long(ctx, 6)).to_integer(), oracle);
}

TEST(Log, ZeroRejected) {
    auto ctx = PadicContext::get(5, 1, 10);
    EXPECT_ERROR_CODE(log_iwasawa(PadicScalar::zero(ctx)), "log-of-zero");
}

TEST(Exp, ExpOfZeroIsOne) {
    auto ctx = PadicContext::get(5, 1, 10);
    EXPECT_EQ(residual_valuation(exp_p(PadicScalar::zero(ctx)), PadicScalar::one(ctx)), 10);
}

TEST(Exp, ExpOfFiveModOneTwentyFive) {
    auto ctx = PadicContext::get(5, 1, 3);
    mpq_class s = 0, term = 1;
    for (int n = 0; n <= 12; ++n) {
        s += term;
        term = term * 5 / (n + 1);
    }
    EXPECT_EQ(reduce_rational(s, 5, 3), 81);
    EXPECT_EQ(exp_p(PadicScalar::from_long(ctx, 5)).to_integer(), 81);
}

TEST(Exp, RoundTripSix) {
    auto ctx = PadicContext::get(5, 1, 20);
    auto six = PadicScalar::from_long(ctx, 6);
    auto r = exp_p(log_iwasawa(six));
    EXPECT_GE(residual_valuation(r, six), r.precision());
    EXPECT_GE(r.precision(), 18);
}

TEST(Exp, DomainError) {
    auto ctx = PadicContext::get(5, 1, 10);
    EXPECT_ERROR_CODE(exp_p(PadicScalar::from_long(ctx, 2)), "exp-out-of-domain");
}

TEST(Frobenius, IdentityOnQp) {
    auto ctx = PadicContext::get(7, 1, 15);
    auto x = PadicScalar::from_long(ctx, 123456);
    EXPECT_EQ(residual_valuation(frobenius(x), x), 15);
}

TEST(Frobenius, TeichmullerEquivariance) {
    auto ctx = PadicContext::get(5, 3, 12);
    auto g = PadicScalar::generator(ctx);
    auto w = teichmuller(g + PadicScalar::from_long(ctx, 2));
    EXPECT_EQ(residual_valuation(frobenius(w), w.pow(5)), 12);
}

TEST(Frobenius, OrderF) {
    std::mt19937_64 rng(3);
    for (int f : {2, 3, 4}) {
        auto ctx = PadicContext::get(7, f, 10);
        for (int i = 0; i < 20; ++i) {
            auto x = random_scalar(ctx, rng);
            EXPECT_EQ(residual_valuation(frobenius(x, f), x), x.precision());
            if (f > 1 && !x.in_base_field()) { EXPECT_LT(residual_valuation(frobenius(x), x), x.precision()); }
        }
    }
}

TEST(Context, DeterministicAndIrreducible) {
    auto a = PadicContext::get(5, 3, 20);
    auto b = std::make_shared<PadicContext>(5, 3, 20);
    EXPECT_EQ(a->defining_polynomial(), b->defining_polynomial());
    // Degree-3 residue polynomial irreducible over F_5: no roots.
    const auto& r = a->residue_polynomial();
    for (long x = 0; x < 5; ++x) {
        long v = 0;
        for (int i = 3; i >= 0; --i) v = (v * x + r[i]) % 5;
        EXPECT_NE(v, 0);
    }
}

TEST(Render, CanonicalFormat) {
    auto ctx = PadicContext::get(5, 1, 4);
    EXPECT_EQ(PadicScalar::from_long(ctx, 555).render(), "5^1 * (1.2.4) + O(5^4)");
    EXPECT_EQ(PadicScalar::zero(ctx).render(), "0 + O(5^4)");
    auto c2 = PadicContext::get(5, 2, 3);
    EXPECT_EQ(PadicScalar::from_vector(c2, {1, 7}).render(), "5^0 * (1.0.0 + 2.1.0*g) + O(5^3)");
}

TEST(Precision, DivisionLosesValuation) {
    auto ctx = PadicContext::get(5, 1, 20);
    auto x = PadicScalar::from_long(ctx, 7) / PadicScalar::from_long(ctx, 25);
    // 25 + O(5^20) carries 18 significant digits, so the quotient does too.
    EXPECT_EQ(x.valuation(), -2);
    EXPECT_EQ(x.relative_precision(), 18);
    EXPECT_EQ(x.precision(), 16);
}

TEST(RationalReconstruct, RecoversSmallRationals) {
    auto ctx = PadicContext::get(13, 1, 20);
    for (const mpq_class& q : {mpq_class(-1), mpq_class(2, 3), mpq_class(-7, 169), mpq_class(13 * 5, 11)}) {
        mpq_class out;
        ASSERT_TRUE(rational_reconstruct(PadicScalar::from_rational(ctx, q), out));
        EXPECT_EQ(out, q);
    }
}

TEST(RationalReconstruct, RejectsWhenPrecisionTooLow) {
    auto ctx = PadicContext::get(5, 1, 3);
    mpq_class out;
    // Three digits bound |a|, |b| by 7, so large fractions cannot come back.
    EXPECT_FALSE(rational_reconstruct(PadicScalar::from_rational(ctx, mpq_class(1000003, 999999)), out) &&
                 out == mpq_class(1000003, 999999));
}

// Smaller-count versions of the property suites (the acceptance binary runs 10^4 each).
TEST(Properties, RingAxioms) {
    std::mt19937_64 rng(11);
    for (int f : {1, 2}) {
        auto ctx = PadicContext::get(7, f, 20);
        for (int i = 0; i < 300; ++i) {
            auto x = random_scalar(ctx, rng), y = random_scalar(ctx, rng), z = random_scalar(ctx, rng);
            EXPECT_EQ(residual_valuation((x + y) + z, x + (y + z)), 20);
            auto l = x * (y + z), r = x * y + x * z;
            EXPECT_GE(residual_valuation(l, r), std::min(l.precision(), r.precision()));
        }
    }
}

TEST(Properties, ValuationAxioms) {
    std::mt19937_64 rng(12);
    auto ctx = PadicContext::get(5, 1, 20);
    for (int i = 0; i < 500; ++i) {
        auto x = random_scalar(ctx, rng, false).mul_pow_p(static_cast<int>(rng() % 4));
        auto y = random_scalar(ctx, rng, false).mul_pow_p(static_cast<int>(rng() % 4));
        if (x.is_zero() || y.is_zero()) continue;
        EXPECT_EQ((x * y).valuation(), x.valuation() + y.valuation());
        auto s = x + y;
        if (!s.is_zero()) {
            EXPECT_GE(s.valuation(), std::min(x.valuation(), y.valuation()));
            if (x.valuation() != y.valuation()) { EXPECT_EQ(s.valuation(), std::min(x.valuation(), y.valuation())); }
        }
    }
}

TEST(Properties, LogHomomorphism) {
    std::mt19937_64 rng(13);
    auto ctx = PadicContext::get(13, 1, 20);
    for (int i = 0; i < 300; ++i) {
        auto x = random_scalar(ctx, rng, false), y = random_scalar(ctx, rng, false);
        auto l = log_iwasawa(x * y), r = log_iwasawa(x) + log_iwasawa(y);
        EXPECT_GE(residual_valuation(l, r), std::min(l.precision(), r.precision()));
    }
}
