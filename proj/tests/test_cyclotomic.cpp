#include <cmath>
#include <random>

#include "padiclz/cyclotomic.hpp"
#include "padiclz/numtheory.hpp"
#include "test_util.hpp"

using namespace padiclz;

namespace {

CycInt random_cyc(long m, std::mt19937_64& rng) {
    std::vector<mpz_class> c(static_cast<size_t>(nt::euler_phi(m)));
    for (auto& x : c) x = static_cast<long>(rng() % 21) - 10;
    return CycInt(m, c);
}

}  // namespace

TEST(CyclotomicUnit, SmallExample) {
    auto u = cyclotomic_unit(2, 5);
    EXPECT_EQ(u.den, 1);
    EXPECT_EQ(u.num, CycInt(5, {1, 1}));
    EXPECT_EQ(u.num.render(), "[1, 1, 0, 0]");
}

TEST(CyclotomicUnit, CompositeLevelIsAUnit) {
    const mpq_class n = cyclotomic_unit(5, 12).norm();
    EXPECT_TRUE(n == 1 || n == -1) << n;
    // Prime power level: N(1 - zeta_5^2)/N(1 - zeta_5) = 5/5.
    EXPECT_EQ(abs(cyclotomic_unit(2, 5).norm()), 1);
}

TEST(CyclotomicUnit, DegenerateRejected) {
    EXPECT_ERROR_CODE(cyclotomic_unit(13, 12), "degenerate-unit");
    EXPECT_ERROR_CODE(cyclotomic_unit(1, 7), "degenerate-unit");
}

TEST(CyclotomicUnit, ConjugateAbsoluteValuesMultiplyToOne) {
    for (long m : {5L, 7L, 12L, 15L, 21L})
        for (long a = 2; a < m; ++a) {
            if (nt::gcd(a, m) != 1) continue;
            auto u = cyclotomic_unit(a, m);
            long double s = 0;
            for (long k = 1; k < m; ++k)
                if (nt::gcd(k, m) == 1) s += complex_log_abs(u, k).value;
            EXPECT_NEAR(static_cast<double>(s), 0.0, 1e-12) << m << ' ' << a;
        }
}

TEST(ComplexLog, Examples) {
    EXPECT_NEAR(static_cast<double>(complex_log_abs(CycFrac::from(CycInt::zeta_power(7, 1)), 1).value), 0.0, 1e-15);
    EXPECT_NEAR(static_cast<double>(complex_log_abs(cyclotomic_unit(2, 5), 1).value), 0.4812118, 1e-7);
    // sqrt 3 = zeta_12 + zeta_12^{-1} under the embedding k = 1.
    auto x = CycInt::integer(12, 2) + CycInt::zeta_power(12, 1) + CycInt::zeta_power(12, 11);
    auto r = complex_log_abs(CycFrac::from(x), 1);
    EXPECT_NEAR(static_cast<double>(r.value), std::log(2 + std::sqrt(3.0)), 1e-12);
    EXPECT_NEAR(static_cast<double>(r.value), 1.3169579, 1e-7);
    EXPECT_LT(r.error, 1e-15L);
}

TEST(PadicLog, RootsOfUnityAndPVanish) {
    EXPECT_TRUE(padic_log_embed(CycFrac::from(CycInt::zeta_power(12, 1)), 13, 20).is_zero());
    EXPECT_TRUE(padic_log_embed(CycFrac::from(CycInt::zeta_power(7, 3)), 5, 12).is_zero());
    EXPECT_TRUE(padic_log_embed(CycFrac::from(CycInt::integer(12, 13)), 13, 20).is_zero());
}

TEST(PadicLog, EmbeddingRespectsProducts) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
        auto a = random_cyc(12, rng), b = random_cyc(12, rng);
        auto ea = a.padic_embedding(13, 15), eb = b.padic_embedding(13, 15);
        EXPECT_EQ(residual_valuation((a * b).padic_embedding(13, 15), ea * eb), 15);
        EXPECT_EQ(residual_valuation((a + b).padic_embedding(13, 15), ea + eb), 15);
    }
}

TEST(Galois, RingAutomorphismUpToSixty) {
    std::mt19937_64 rng(32);
    for (long m = 3; m <= 60; ++m) {
        auto x = random_cyc(m, rng), y = random_cyc(m, rng);
        for (long a = 1; a < m; ++a) {
            if (nt::gcd(a, m) != 1) continue;
            EXPECT_EQ((x * y).galois(a), x.galois(a) * y.galois(a)) << m << ' ' << a;
            EXPECT_EQ((x + y).galois(a), x.galois(a) + y.galois(a));
            const long b = 1 + static_cast<long>(rng() % (m - 1));
            if (nt::gcd(b, m) == 1) { EXPECT_EQ(x.galois(a).galois(b), x.galois(a * b % m)); }
        }
        EXPECT_EQ(x.galois(1), x);
        EXPECT_EQ(x.norm(), x.conj().norm());
    }
}

TEST(Galois, EmbeddingCompatibility) {
    std::mt19937_64 rng(33);
    auto x = random_cyc(15, rng);
    for (long a : {2L, 4L, 7L, 8L}) {
        const auto l = x.galois(a).complex_embedding(1), r = x.complex_embedding(a);
        EXPECT_NEAR(static_cast<double>(std::abs(l - r)), 0.0, 1e-12);
    }
}

TEST(Idempotents, PartitionOfUnity) {
    for (long m : {7L, 12L, 15L}) {
        auto x = cyclotomic_unit(m == 12 ? 5 : 2, m);
        std::complex<long double> s = 0;
        for (long i = 1; i <= DirichletCharacter::dual_group_size(m); ++i)
            s += e_chi_project(x, DirichletCharacter::from_index(m, i)).complex_log(1);
        EXPECT_NEAR(static_cast<double>(std::abs(s - std::log(std::abs(x.complex_embedding(1))))), 0.0, 1e-12) << m;
    }
}

TEST(Idempotents, EquivarianceAndOrthogonality) {
    const long m = 15;
    auto x = cyclotomic_unit(2, m);
    for (long i = 1; i <= DirichletCharacter::dual_group_size(m); ++i) {
        auto chi = DirichletCharacter::from_index(m, i);
        const auto base = e_chi_project(x, chi).complex_log(1);
        for (long b : {2L, 7L, 11L}) {
            const auto lhs = e_chi_project(x.galois(b), chi).complex_log(1);
            const auto cb = chi.complex_value(b);
            const auto rhs = std::complex<long double>(cb.real(), cb.imag()) * base;
            EXPECT_NEAR(static_cast<double>(std::abs(lhs - rhs)), 0.0, 1e-12) << i << ' ' << b;
        }
        // Galois-invariant input: only the trivial component survives.
        const auto inv = e_chi_project(CycFrac::from(CycInt::integer(m, 3)), chi).complex_log(1);
        if (chi.is_trivial()) EXPECT_NEAR(static_cast<double>(inv.real()), std::log(3.0), 1e-12);
        else EXPECT_NEAR(static_cast<double>(std::abs(inv)), 0.0, 1e-12);
    }
}

TEST(Idempotents, PadicProjectionMatchesOnTrivialCharacter) {
    auto x = cyclotomic_unit(5, 12);
    auto pu = e_chi_project(x, DirichletCharacter::trivial(12), 13);
    // The norm of a unit is +-1, so the trivial projection has log 0.
    EXPECT_TRUE(pu.padic_log(13, 15).is_zero());
}

TEST(Idempotents, NonIntegralRejected) {
    auto x = cyclotomic_unit(2, 7);
    EXPECT_ERROR_CODE(e_chi_project(x, DirichletCharacter::kronecker(-7), 3), "idempotent-not-integral");
    EXPECT_ERROR_CODE(e_chi_project(x, DirichletCharacter::kronecker(-7), 2), "idempotent-not-integral");
}
