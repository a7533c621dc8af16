#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

#include "padiclz/padic.hpp"

namespace padiclz {

// Chosen primitive n-th root of unity in W_{f'}, f' = ord_n(p): the Teichmuller
// lift of gamma^{(p^{f'}-1)/n}, where gamma is a fixed generator of the residue
// field (smallest primitive root for f' = 1; otherwise the lexicographically
// smallest generator, c_0 first, whose norm is that primitive root). Roots of
// the same f', or of f' = 1, are therefore powers of one another. This is the
// single fixed embedding of roots of unity used everywhere in the library.
struct RootOfUnity {
    ContextPtr ctx;
    int order = 1;
    PadicScalar zeta;
    std::vector<PadicScalar> powers;  // zeta^0 .. zeta^{order-1}
};

RootOfUnity chosen_root_of_unity(long p, int n, int N);
// Residue of the chosen root (coefficients mod p), used for discrete logs.
std::vector<long> chosen_root_residue(long p, int n);

// Exact element of Q(zeta_n) written as sum_e c_e zeta_n^e (not reduced).
struct CycRational {
    int order = 1;
    std::vector<mpq_class> coeffs;

    bool is_rational() const;    // all non-constant terms vanish after reduction
    mpq_class rational() const;  // valid when is_rational()
    std::complex<double> complex_value() const;
    PadicScalar padic_value(long p, int N) const;
};

// A Dirichlet character modulo f stored as an exponent table: chi(a) = zeta_n^{e(a)}.
class DirichletCharacter {
public:
    DirichletCharacter() = default;
    // Exponent table indexed by a in [0, f); -1 marks gcd(a, f) > 1.
    DirichletCharacter(long modulus, int order, std::vector<int> table);

    static DirichletCharacter trivial(long modulus);
    // 1-based index into the dual group; index - 1 = x_1 + m_1 (x_2 + m_2 (...)),
    // where the components are the cyclic factors of (Z/f)^x ordered by prime
    // (for 2^k: the -1 factor, then the 5 factor) with the smallest generators,
    // and x_i is the exponent of chi at the i-th generator in units of 1/m_i.
    static DirichletCharacter from_index(long modulus, long index);
    static long dual_group_size(long modulus);
    // Kronecker symbol character a -> (D/a) modulo |D| for a fundamental discriminant D.
    static DirichletCharacter kronecker(long D);
    // The Teichmuller character mod p: a -> omega(a), realized by the chosen root.
    static DirichletCharacter teichmuller(long p);
    // Parses "chi{modulus=3, index=2}".
    static DirichletCharacter parse(const std::string& spec);

    long modulus() const { return f_; }
    int order() const { return n_; }
    const std::vector<int>& table() const { return table_; }
    long index() const;  // inverse of from_index
    std::string spec_string() const;

    int exponent(long a) const;  // -1 when gcd(a, f) > 1
    bool is_trivial() const { return n_ == 1; }
    bool is_even() const { return exponent(f_ - 1) == 0; }
    bool is_odd() const { return !is_even(); }
    long conductor() const;
    bool is_primitive() const { return conductor() == f_; }
    DirichletCharacter primitive() const;
    DirichletCharacter induced(long modulus) const;  // modulus must be a multiple of f

    // Exponent-arithmetic operations (same root system).
    DirichletCharacter inverse() const;
    DirichletCharacter pow(long k) const;

    std::complex<double> complex_value(long a) const;
    PadicScalar padic_value(long a, long p, int N) const;
    RootOfUnity realization(long p, int N) const;

    bool operator==(const DirichletCharacter& o) const;

private:
    long f_ = 1;
    int n_ = 1;
    std::vector<int> table_{0};
};

// Pointwise product of p-adic realizations, re-expressed through the chosen
// root of the product's order. Both factors must have order prime to p.
DirichletCharacter padic_product(const DirichletCharacter& a, const DirichletCharacter& b, long p);
// chi * omega^j as a character of modulus lcm(f, p).
DirichletCharacter twist_by_teichmuller(const DirichletCharacter& chi, long j, long p);

// B_{n, chi} = f^{n-1} sum_{a=1}^{f} chi(a) B_n(a/f), exactly.
CycRational bernoulli_general(const DirichletCharacter& chi, int n);

// Imaginary quadratic field k = Q(sqrt(D)), an odd prime p split in k and a
// character chi_Q whose base change chi = chi_Q o N to k is the branch character.
struct HeckeSetup {
    long disc = -4;
    long p = 13;
    DirichletCharacter chi_q;
    DirichletCharacter eps_k;

    static HeckeSetup make(long disc, long p, const DirichletCharacter& chi_q);
};

struct FrobeniusValue {
    int exponent = 0;  // chi(Frob_v) = zeta^exponent
    int order = 1;
    PadicScalar value;
    bool is_one() const { return exponent == 0; }
};

// v is described by the rational prime ell below it and, for split ell, which
// of the two primes (0 for the iota_p-distinguished one, 1 for its conjugate).
FrobeniusValue chi_at_frobenius(const HeckeSetup& s, long ell, int which, int N = 20);
int exceptional_count(const HeckeSetup& s);

}  // namespace padiclz
