#include <random>

#include "padiclz/characters.hpp"
#include "padiclz/numtheory.hpp"
#include "test_util.hpp"

using namespace padiclz;

namespace {

// chi(a) for every a mod f, compared against 1 through the exponent table.
bool trivial_on_kernel(const DirichletCharacter& chi, long d) {
    const long f = chi.modulus();
    for (long a = 1; a < f; ++a)
        if (nt::gcd(a, f) == 1 && a % d == 1 % d && chi.exponent(a) != 0) return false;
    return true;
}

}  // namespace

TEST(Bernoulli, OddQuadraticExamples) {
    // B_{1,chi} = (1/f) sum chi(a) a.
    auto b3 = bernoulli_general(DirichletCharacter::kronecker(-3), 1);
    ASSERT_TRUE(b3.is_rational());
    EXPECT_EQ(b3.rational(), mpq_class(-1, 3));
    auto b4 = bernoulli_general(DirichletCharacter::kronecker(-4), 1);
    ASSERT_TRUE(b4.is_rational());
    EXPECT_EQ(b4.rational(), mpq_class(-1, 2));
    auto b23 = bernoulli_general(DirichletCharacter::kronecker(-23), 1);
    EXPECT_EQ(b23.rational(), mpq_class(-3));  // -h for D < -4
}

TEST(Bernoulli, SecondBernoulliOfRealQuadratic) {
    // zeta_{Q(sqrt 5)}(-1) = 1/30 = zeta(-1) L(-1, chi_5) gives B_{2,chi_5} = 4/5.
    auto b = bernoulli_general(DirichletCharacter::kronecker(5), 2);
    ASSERT_TRUE(b.is_rational());
    EXPECT_EQ(b.rational(), mpq_class(4, 5));
}

TEST(Bernoulli, EvenNontrivialFirstBernoulliVanishes) {
    for (long f = 3; f <= 50; ++f)
        for (long i = 1; i <= DirichletCharacter::dual_group_size(f); ++i) {
            auto chi = DirichletCharacter::from_index(f, i);
            if (chi.is_trivial() || chi.is_odd()) continue;
            auto b = bernoulli_general(chi, 1);
            EXPECT_LT(std::abs(b.complex_value()), 1e-12) << chi.spec_string();
            EXPECT_TRUE(b.is_rational() && b.rational() == 0) << chi.spec_string();
        }
}

TEST(Characters, IndexRoundTripAndParse) {
    for (long f : {3L, 8L, 12L, 15L, 16L, 40L, 63L})
        for (long i = 1; i <= DirichletCharacter::dual_group_size(f); ++i) {
            auto chi = DirichletCharacter::from_index(f, i);
            EXPECT_EQ(chi.index(), i);
            EXPECT_EQ(DirichletCharacter::parse(chi.spec_string()), chi);
        }
    EXPECT_EQ(DirichletCharacter::dual_group_size(40), nt::euler_phi(40));
}

TEST(Characters, KroneckerMatchesSymbol) {
    for (long D : {-3L, -4L, -8L, -7L, 5L, 12L, -23L})
        for (long a = 1; a < std::abs(D); ++a) {
            auto chi = DirichletCharacter::kronecker(D);
            const long k = nt::kronecker(D, a);
            if (k == 0) EXPECT_EQ(chi.exponent(a), -1);
            else EXPECT_EQ(chi.complex_value(a).real(), static_cast<double>(k)) << D << ' ' << a;
        }
}

TEST(Properties, MultiplicativityAndConductorMinimality) {
    std::mt19937_64 rng(21);
    for (long f = 2; f <= 200; ++f) {
        const long size = DirichletCharacter::dual_group_size(f);
        for (int t = 0; t < 3; ++t) {
            auto chi = DirichletCharacter::from_index(f, 1 + static_cast<long>(rng() % size));
            for (int k = 0; k < 30; ++k) {
                const long a = static_cast<long>(rng() % f), b = static_cast<long>(rng() % f);
                const int ea = chi.exponent(a), eb = chi.exponent(b), eab = chi.exponent(a * b % f);
                if (ea < 0 || eb < 0) EXPECT_EQ(eab, -1);
                else EXPECT_EQ(eab, (ea + eb) % chi.order());
            }
            long d = 1;
            for (long q : nt::divisors(f))
                if (trivial_on_kernel(chi, q)) {
                    d = q;
                    break;
                }
            EXPECT_EQ(chi.conductor(), d) << chi.spec_string();
            // The primitive character agrees with chi away from f.
            auto prim = chi.primitive();
            EXPECT_EQ(prim.modulus(), d);
            for (long a = 1; a < f; ++a)
                if (nt::gcd(a, f) == 1) { EXPECT_EQ(prim.complex_value(a % d), chi.complex_value(a)); }
        }
    }
}

TEST(RootsOfUnity, ExactOrder) {
    for (long p : {5L, 7L, 13L})
        for (int n : {2, 3, 4, 6, 8, 9, 12}) {
            if (n % p == 0) continue;
            auto r = chosen_root_of_unity(p, n, 15);
            const auto one = PadicScalar::one(r.ctx);
            EXPECT_EQ(residual_valuation(r.zeta.pow(n), one), 15);
            for (auto [q, e] : nt::factor(n)) EXPECT_EQ(residual_valuation(r.zeta.pow(n / q), one), 0) << p << ' ' << n;
            EXPECT_EQ(r.ctx->degree(), nt::multiplicative_order(p, n));
        }
}

TEST(RootsOfUnity, PadicRealizationIsMultiplicative) {
    auto chi = DirichletCharacter::from_index(13, 2);
    for (long a = 1; a < 13; ++a)
        for (long b = 1; b < 13; ++b) {
            auto l = chi.padic_value(a * b, 5, 12), r = chi.padic_value(a, 5, 12) * chi.padic_value(b, 5, 12);
            EXPECT_EQ(residual_valuation(l, r), 12);
        }
}

TEST(Frobenius, GaussianFieldWithChi3) {
    auto s13 = HeckeSetup::make(-4, 13, DirichletCharacter::kronecker(-3));
    auto v = chi_at_frobenius(s13, 13, 0);
    EXPECT_TRUE(v.is_one());
    EXPECT_EQ(residual_valuation(v.value, PadicScalar::one(v.value.context())), 20);
    auto s5 = HeckeSetup::make(-4, 5, DirichletCharacter::kronecker(-3));
    auto w = chi_at_frobenius(s5, 5, 0);
    EXPECT_FALSE(w.is_one());
    EXPECT_EQ(residual_valuation(w.value, PadicScalar::from_long(w.value.context(), -1)), 20);
    // 7 is inert in Q(i): Frob has norm 49 and chi_3(49) = 1.
    EXPECT_TRUE(chi_at_frobenius(s5, 7, 0).is_one());
}

TEST(Frobenius, ExceptionalCount) {
    EXPECT_EQ(exceptional_count(HeckeSetup::make(-4, 13, DirichletCharacter::kronecker(-3))), 1);
    EXPECT_EQ(exceptional_count(HeckeSetup::make(-4, 5, DirichletCharacter::kronecker(-3))), 0);
    // Order-3 character mod 7: 5 has order 6 mod 7, so chi(p^c) is a primitive cube root.
    auto chi = DirichletCharacter::from_index(7, 3);
    ASSERT_EQ(chi.order(), 3);
    auto s = HeckeSetup::make(-4, 5, chi);
    auto v = chi_at_frobenius(s, 5, 1);
    EXPECT_EQ(v.order, 3);
    EXPECT_NE(v.exponent, 0);
    EXPECT_EQ(exceptional_count(s), 0);
}

TEST(Frobenius, RamifiedPlaceRejected) {
    auto s = HeckeSetup::make(-4, 13, DirichletCharacter::kronecker(-3));
    EXPECT_ERROR_CODE(chi_at_frobenius(s, 3, 0), "frobenius-undefined");
}

TEST(Setup, Validation) {
    auto chi3 = DirichletCharacter::kronecker(-3);
    EXPECT_ERROR_CODE(HeckeSetup::make(-4, 7, chi3), "p-not-split");
    EXPECT_ERROR_CODE(HeckeSetup::make(-12, 13, chi3), "invalid-field");
    EXPECT_ERROR_CODE(HeckeSetup::make(-4, 3, chi3), "invalid-prime");
    EXPECT_ERROR_CODE(HeckeSetup::make(-4, 13, DirichletCharacter::trivial(3)), "trivial-character");
    EXPECT_ERROR_CODE(HeckeSetup::make(-4, 13, DirichletCharacter::kronecker(-4)), "trivial-character");
    EXPECT_ERROR_CODE(HeckeSetup::make(-4, 13, DirichletCharacter::kronecker(13)), "p-ramified-in-L");
}

TEST(Twist, TeichmullerTwistIsProductOfValues) {
    auto chi = DirichletCharacter::kronecker(-3);
    auto t = twist_by_teichmuller(chi, 1, 5);
    EXPECT_EQ(t.modulus(), 15);
    auto w = DirichletCharacter::teichmuller(5);
    for (long a = 1; a < 15; ++a) {
        if (nt::gcd(a, 15) != 1) continue;
        auto l = t.padic_value(a, 5, 10), r = chi.padic_value(a, 5, 10) * w.padic_value(a, 5, 10);
        EXPECT_EQ(residual_valuation(l, r), 10) << a;
    }
}
