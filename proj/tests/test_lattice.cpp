#include <algorithm>
#include <random>
#include <set>

#include "padiclz/lattice.hpp"
#include "padiclz/numtheory.hpp"
#include "test_util.hpp"

using namespace padiclz;

namespace {

ModElem random_vec(const FiniteRing& R, int n, std::mt19937_64& rng) {
    ModElem v(n);
    for (auto& x : v) x = static_cast<int>(rng() % R.size());
    return v;
}

ModElem axpy(const FiniteRing& R, int a, const ModElem& x, const ModElem& y) {
    ModElem out(y);
    for (size_t i = 0; i < y.size(); ++i) out[i] = R.add(out[i], R.mul(a, x[i]));
    return out;
}

int apply_functional(const FiniteRing& R, const ModElem& phi, const ModElem& x) {
    int s = 0;
    for (size_t i = 0; i < x.size(); ++i) s = R.add(s, R.mul(phi[i], x[i]));
    return s;
}

ModElem basis_vector(int n, int i) {
    ModElem e(n, 0);
    e[i] = 1;
    return e;
}

}  // namespace

TEST(Rings, SmallRingsSatisfyAxioms) {
    auto rings = small_rings(8);
    ASSERT_GE(rings.size(), 8u);
    for (const auto& R : rings) {
        EXPECT_LE(R.size(), 8);
        EXPECT_TRUE(R.verify_axioms()) << R.describe();
    }
}

TEST(Rings, GroupRingMultiplication) {
    // (Z/2)[C2]: (1 + g)^2 = 1 + 2g + g^2 = 0.
    auto R = FiniteRing::group_ring(2, {2});
    const int one_plus_g = R.from_coefficients({1, 1});
    EXPECT_EQ(R.mul(one_plus_g, one_plus_g), R.zero());
    const int g = R.from_coefficients({0, 1});
    EXPECT_EQ(R.mul(g, g), R.one());
}

TEST(Bidual, ZeroRankIsTheRing) {
    auto R = FiniteRing::integers_mod(4);
    std::mt19937_64 rng(61);
    auto M = random_module(R, 2, 2, rng);
    auto B = bidual(M, 0);
    EXPECT_EQ(B.elements.size(), static_cast<size_t>(R.size()));
}

TEST(Bidual, TwoTorsionInZMod4) {
    PresentedModule M;
    M.R = FiniteRing::integers_mod(4);
    M.n1 = 1;
    M.n2 = 1;
    M.A = {{2}};
    EXPECT_EQ(M.elements().size(), 2u);
    auto B = bidual(M, 1);
    EXPECT_EQ(B.elements.size(), 2u);
    // Hom(Z/2, Z/4) = {0, x -> 2x}; its dual is again of order 2.
    auto D = brute_force_double_dual(M, 1);
    EXPECT_EQ(D.form_count, 2u);
    EXPECT_EQ(D.image.elements, B.elements);
    EXPECT_EQ(B.elements, (std::vector<ModElem>{{0}, {2}}));
}

TEST(Bidual, FreeModulesCollapseToExteriorPower) {
    std::mt19937_64 rng(62);
    for (const auto& R : small_rings(8)) {
        for (int rank = 1; rank <= 2; ++rank) {
            auto F = random_free_module(R, rank, 1, rng);
            EXPECT_EQ(F.module.elements().size(), static_cast<size_t>(std::pow(R.size(), rank))) << R.describe();
            for (int r = 1; r <= rank; ++r) {
                auto B = bidual(F.module, r);
                std::vector<ModElem> gens;
                for (const auto& idx : wedge_basis(rank, r)) {
                    std::vector<ModElem> xs;
                    for (int i : idx) xs.push_back(F.basis[i]);
                    gens.push_back(wedge_of(R, F.module.n1, xs));
                }
                const auto plain = span(R, gens, wedge_basis(F.module.n1, r).size());
                EXPECT_EQ(B.elements, plain) << R.describe() << " rank " << rank << " r " << r;
                EXPECT_EQ(B.elements.size(), static_cast<size_t>(std::pow(R.size(), nt::binomial(rank, r).get_si())));
            }
        }
    }
}

TEST(Bidual, MatchesBruteForceOnRandomInstances) {
    std::mt19937_64 rng(63);
    for (const auto& R : small_rings(8)) {
        for (int t = 0; t < 4; ++t) {
            const int n1 = 1 + static_cast<int>(rng() % 3), n2 = 1 + static_cast<int>(rng() % 2);
            auto M = random_module(R, n1, n2, rng);
            for (int r = 1; r <= std::min(n1, 2); ++r) {
                auto B = bidual(M, r);
                auto D = brute_force_double_dual(M, r);
                EXPECT_EQ(B.elements, D.image.elements) << R.describe() << " n1 " << n1 << " r " << r;
            }
        }
    }
}

TEST(Bidual, BaseChangeContainsReduction) {
    std::mt19937_64 rng(64);
    for (long pa : {4L, 8L}) {
        auto R = FiniteRing::integers_mod(pa);
        for (int t = 0; t < 5; ++t) {
            auto M = random_module(R, 2, 1, rng);
            auto Mq = M.base_change(2);
            for (int r = 1; r <= 2; ++r) {
                auto B = bidual(M, r), Bq = bidual(Mq, r);
                std::set<ModElem> target(Bq.elements.begin(), Bq.elements.end());
                for (const auto& x : B.elements) {
                    ModElem y(x.size());
                    for (size_t i = 0; i < x.size(); ++i) y[i] = R.reduce_to(Mq.R, x[i]);
                    EXPECT_TRUE(target.count(y)) << pa;
                }
            }
        }
    }
}

TEST(Bidual, SizeGuard) {
    auto R = FiniteRing::integers_mod(8);
    std::mt19937_64 rng(65);
    auto M = random_module(R, 8, 1, rng);
    EXPECT_ERROR_CODE(bidual(M, 4), "instance-too-large");
    EXPECT_ERROR_CODE(FiniteRing::integers_mod(8192), "instance-too-large");
}

TEST(Contract, SingleFunctionalOnTwoVectors) {
    std::mt19937_64 rng(66);
    auto R = FiniteRing::integers_mod(5);
    const int n = 3;
    for (int t = 0; t < 20; ++t) {
        auto x = random_vec(R, n, rng), y = random_vec(R, n, rng), phi = random_vec(R, n, rng);
        auto got = wedge_contract(R, n, {phi}, wedge_of(R, n, {x, y}), 2);
        // phi(x) y - phi(y) x as a vector in wedge^1 = R^n.
        auto expected = axpy(R, R.neg(apply_functional(R, phi, y)), x, axpy(R, apply_functional(R, phi, x), y, ModElem(n, 0)));
        EXPECT_EQ(got, expected);
    }
}

TEST(Contract, DualBasisExtractsCoordinates) {
    auto R = FiniteRing::integers_mod(7);
    const int n = 3;
    std::mt19937_64 rng(67);
    auto x = random_vec(R, n, rng), y = random_vec(R, n, rng);
    const auto w = wedge_of(R, n, {x, y});
    const auto basis = wedge_basis(n, 2);
    for (size_t k = 0; k < basis.size(); ++k) {
        const int i = basis[k][0], j = basis[k][1];
        // e_j^* after e_i^* on x ^ y gives the (i, j) minor.
        auto c = wedge_contract(R, n, {basis_vector(n, i), basis_vector(n, j)}, w, 2);
        ASSERT_EQ(c.size(), 1u);
        EXPECT_EQ(c[0], w[k]);
    }
}

TEST(Contract, ArityMismatch) {
    auto R = FiniteRing::integers_mod(3);
    auto w = wedge_of(R, 3, {basis_vector(3, 0), basis_vector(3, 1)});
    EXPECT_ERROR_CODE(wedge_contract(R, 3, {basis_vector(3, 0), basis_vector(3, 1), basis_vector(3, 2)}, w, 2),
                      "arity-mismatch");
}

TEST(Contract, StarkSignRule) {
    // Three synthetic S-units with ord_{v_j}(u_i) = delta_ij. Removing v in V \ V' by its ord
    // functional leaves the wedge over V' with sign (-1)^{position of v}.
    auto R = FiniteRing::integers_mod(5);
    const int n = 3;
    std::vector<ModElem> u{basis_vector(n, 0), basis_vector(n, 1), basis_vector(n, 2)};
    const auto top = wedge_of(R, n, u);
    for (int drop = 0; drop < 3; ++drop) {
        std::vector<ModElem> rest;
        for (int i = 0; i < 3; ++i)
            if (i != drop) rest.push_back(u[i]);
        auto got = wedge_contract(R, n, {basis_vector(n, drop)}, top, 3);
        auto expected = wedge_of(R, n, rest);
        if (drop % 2) for (auto& c : expected) c = R.neg(c);
        EXPECT_EQ(got, expected) << drop;
    }
    // Same rule after a unimodular change that keeps the ord matrix triangular.
    std::vector<ModElem> v{u[0], axpy(R, 3, u[0], u[1]), axpy(R, 2, u[1], u[2])};
    auto got = wedge_contract(R, n, {basis_vector(n, 2)}, wedge_of(R, n, v), 3);
    // ord_{v_3}: only v[2] has a nonzero value 1, at position 3, so the sign is +.
    EXPECT_EQ(got, wedge_of(R, n, {v[0], v[1]}));
}
