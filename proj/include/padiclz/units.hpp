#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "padiclz/characters.hpp"
#include "padiclz/cyclotomic.hpp"
#include "padiclz/iwasawa.hpp"
#include "padiclz/padic.hpp"

namespace padiclz {

// g(chi) = sum_{a mod l} chi(a) zeta_l^a for chi modulo a prime l, exact in Z[zeta_m],
// m = lcm(l, order of chi).
struct GaussSum {
    DirichletCharacter chi;
    long ell = 0;
    CycInt value;
    PadicScalar embedded(long p, int N) const { return value.padic_embedding(p, N); }
};

GaussSum gauss_sum(const DirichletCharacter& chi);

// J(a, b) = sum_x a(x) b(1 - x) for characters modulo the same prime.
CycInt jacobi_sum(const DirichletCharacter& a, const DirichletCharacter& b);

// J(omega^{-a}, omega^{-b}) for the Teichmuller character mod p, embedded in Z_p.
PadicScalar teichmuller_jacobi_sum(long p, long a, long b, int N);
// Its p-adic valuation predicted by Stickelberger: (a + b - <a+b>) / (p-1).
int stickelberger_exponent(long p, long a, long b);
// Gross-Koblitz: -pi^{a+b-c} Gamma_p(a/(p-1)) Gamma_p(b/(p-1)) / Gamma_p(c/(p-1)),
// c = (a + b) mod (p-1) in (0, p-1), pi^{p-1} = -p.
PadicScalar gross_koblitz_jacobi(long p, long a, long b, int N);

// Morita's Gamma_p on Z_p: Gamma_p(n) = (-1)^n prod_{0<j<n, p does not divide j} j
// extended by continuity. The argument must lie in Z_p; the result has the
// argument's precision.
PadicScalar morita_gamma(const PadicScalar& x);
PadicScalar morita_gamma_integer(long p, const mpz_class& n, int N);

// Class number of the imaginary quadratic field of fundamental discriminant D < 0.
long class_number(long D);
// Fundamental discriminant of the quadratic field cut out by a quadratic character.
long quadratic_discriminant(const DirichletCharacter& chi);
// Discriminant of the imaginary quadratic field attached to the odd member of
// {chi_Q, chi_Q eps_k}, where the p-unit u lives.
long odd_discriminant(const HeckeSetup& s);
// sqrt(D) as the Gauss sum of the Kronecker character of D, in Z[zeta_|D|].
CycInt sqrt_discriminant(long D);

// An element of a quadratic subfield of Q(zeta_m) with prescribed divisor over p.
struct PUnit {
    long disc = 0;        // field Q(sqrt(disc))
    CycFrac value;
    int exp_p = 0;        // valuation at the iota_p-prime
    int exp_pc = 0;       // valuation at its conjugate
    int conj_sign = -1;   // complex conjugation acts as x -> x^{conj_sign}
    long class_no = 1;
    std::string construction;
};

// x = pi / conj(pi) with (pi) = P^h, from a primitive solution of a^2 - D b^2 = 4 p^{h m},
// in the imaginary quadratic field attached to the odd member of {chi_Q, chi_Q eps_k}.
// Throws "no split prime" when p is inert there and "stickelberger-mismatch" when
// the divisor check fails.
PUnit stickelberger_punit(const HeckeSetup& s, int m = 1);
// x = pi / conj(pi) for an explicit generator pi = a + b sqrt(D) (a, b in (1/2)Z) of
// P^e, e.g. a config override; the divisor is verified the same way.
PUnit punit_from_generator(long D, long p, const mpq_class& a, const mpq_class& b);
// Same field from the Jacobi sum J(alpha, alpha) of a cubic (D = -3) or quartic
// (D = -4) character mod p. Throws "unsupported" for other fields.
PUnit stickelberger_punit_jacobi(const HeckeSetup& s);
bool jacobi_route_available(const HeckeSetup& s);

// -log_p(iota_p(conj u)) / ord_{P^c}(u); throws "not-in-X-generically" when the order is 0.
PadicScalar l_invariant_cyclotomic(const HeckeSetup& s, const PUnit& u, int N = 20);

// Basis of the chi-part of O_L[1/p]^x (L = k(sqrt(D_Q))): the odd p-unit, the
// fundamental unit and a p-unit of the real quadratic twin.
struct ChiUnitBasis {
    std::vector<CycFrac> elements;
    std::vector<std::string> labels;
    long odd_disc = 0;
    long even_disc = 0;
};

ChiUnitBasis chi_unit_basis(const HeckeSetup& s);

// Weights (a, b) of rec_{Gamma, P^c} on Q_p^x: y -> a ord(y) + b chi_cyc(rec(y)).
struct GammaWeights {
    mpq_class ord_weight = 0;
    mpq_class cyc_weight = 0;
    static GammaWeights unramified_outside_p() { return {1, 0}; }
    static GammaWeights split_completely() { return {0, 0}; }
    static GammaWeights cyclotomic() { return {0, 1}; }
};

// chi_cyc(rec(y)) = kArtinSign * (-log_p(y)) on Q_p^x.
constexpr int kArtinSign = 1;

struct DefinitionalLInvariant {
    PadicScalar value;       // in chi_cyc coordinates
    PadicScalar ord_det;     // det(ord_P, log_P, ord_P^c)
    PadicScalar cyc_ratio;   // chi_cyc-evaluation of the cyclotomic part
};

// L as det(ord_P, log_P, rec_P^c) / det(ord_P, log_P, ord_P^c) on the basis;
// throws "leopoldt-uncertifiable" when the denominator vanishes to precision.
DefinitionalLInvariant l_invariant_definitional(const HeckeSetup& s, const ChiUnitBasis& basis,
                                                const GammaWeights& w, int N = 20);

// Period-free comparison of the Katz leading term on the cyclotomic line with
// -L (1 - chi(P)/p) S, where the arch factor is replaced by its Kubota-Leopoldt
// surrogate S = L(0, chi_Q^{-1}) V_2 / (1 - chi(P)/p), V_2 the value at T = 0 of
// the reflected second Gross factor. ratio is the unknown period, up to setup
// independence.
struct LeadingTermRatio {
    LeadingTerm katz;
    PadicScalar katz_value;    // chi_cyc-evaluation of the leading term
    PadicScalar l_invariant;   // chi_cyc(L)
    PadicScalar euler_factor;  // 1 - chi(P)/p
    PadicScalar surrogate;
    PadicScalar ratio;
};

LeadingTermRatio leading_term_ratio(const HeckeSetup& s, int depth = 4, int M = 20, int N = 20);

}  // namespace padiclz
