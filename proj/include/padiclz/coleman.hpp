#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "padiclz/iwasawa.hpp"
#include "padiclz/padic.hpp"

namespace padiclz {

// Element of Z_p[zeta_n] (zeta_n a primitive p^n-th root of unity, zeta_{n+1}^p = zeta_n)
// known modulo p^precision. Level 0 is Z_p itself. Stored on the power basis of
// zeta_n; coefficients() converts to the (zeta_n - 1)^i basis.
class TowerElement {
public:
    TowerElement() = default;
    TowerElement(long p, int level, int precision);  // zero

    static TowerElement integer(long p, int level, int precision, const mpz_class& c);
    static TowerElement zeta_power(long p, int level, int precision, long k);
    static TowerElement uniformizer(long p, int level, int precision);  // zeta_n - 1
    static TowerElement from_pi_basis(long p, int level, int precision, const std::vector<mpz_class>& b);

    long prime() const { return p_; }
    int level() const { return n_; }
    int precision() const { return N_; }
    int degree() const { return static_cast<int>(c_.size()); }  // p^{n-1}(p-1), 1 at level 0
    const std::vector<mpz_class>& zeta_coefficients() const { return c_; }
    std::vector<mpz_class> pi_coefficients() const;
    std::vector<PadicScalar> coefficients() const;
    // ord_{pi_n}, so ord(zeta_n - 1) = 1 and ord(p) = degree(); precision * degree() for zero.
    int valuation() const;
    bool is_zero() const;

    TowerElement operator+(const TowerElement& o) const;
    TowerElement operator-(const TowerElement& o) const;
    TowerElement operator*(const TowerElement& o) const;
    TowerElement operator*(const mpz_class& k) const;
    TowerElement galois(const mpz_class& a) const;  // zeta_n -> zeta_n^a
    TowerElement norm_down() const;                 // N_{n/n-1}
    TowerElement norm_to(int level) const;
    TowerElement inverse() const;                   // units only
    TowerElement divide_by_uniformizer() const;     // x / (zeta_n - 1); loses one digit
    TowerElement divide_by_p() const;               // exact; throws if not divisible
    TowerElement with_precision(int N) const;
    TowerElement embed(int level) const;            // into a higher level
    PadicScalar to_scalar(const ContextPtr& ctx) const;  // level 0 or an element of Z_p
    std::string dump() const;                        // pi-basis digits, one line

private:
    long p_ = 5;
    int n_ = 0;
    int N_ = 20;
    std::vector<mpz_class> c_{0};
    const mpz_class& modulus() const;
    void check_same(const TowerElement& o) const;
};

int residual_valuation(const TowerElement& a, const TowerElement& b);  // in Z_p-digits, floor

enum class TowerKind { Uniformizer, UnitFromRec, CyclotomicUnit };

struct TowerParams {
    TowerKind kind = TowerKind::Uniformizer;
    long p = 5;
    int levels = 3;
    int precision = 20;
    mpz_class u = 1;      // unit-from-rec: rec(u^{-1}) acts by zeta -> zeta^u
    mpz_class w = 1;      // unit-from-rec: the uniformizer lifted is p * w
    long a = 2;           // cyclotomic-unit: (zeta^a - 1)/(zeta - 1)
};

// Levels 1..levels, checked for norm coherence (throws "norm-incoherent").
std::vector<TowerElement> build_cyclotomic_tower(const TowerParams& params);
void check_norm_coherence(const std::vector<TowerElement>& tower);
std::vector<TowerElement> tower_product(const std::vector<TowerElement>& a, const std::vector<TowerElement>& b);
std::vector<TowerElement> tower_galois(const std::vector<TowerElement>& t, const mpz_class& u);
std::string dump_tower(const std::vector<TowerElement>& t);

// The Coleman power series as its canonical representative modulo
// f^{(n)}(X)/X = ((1+X)^{p^n} - 1)/X, n = number of levels: the unique
// polynomial of degree < p^n - 1 with g(zeta_k - 1) = beta_k for k <= n. Levels
// 1..n only see g modulo that ideal, so coefficient i agrees with the true
// series to determined_precision(i) = n - floor(log_p(i+1)) digits.
struct ColemanSeries {
    long p = 5;
    int levels = 0;
    int nu = 0;         // ord(beta_1)
    int precision = 0;  // arithmetic precision of the coefficients
    std::vector<PadicScalar> coeffs;
    std::vector<int> level_residuals;  // valuation of g(omega_k) - beta_k

    int determined_precision(int i) const;
    PadicScalar coefficient(int i) const;
    TowerElement evaluate(int level) const;  // g(zeta_k - 1)
};

ColemanSeries solve_coleman(const std::vector<TowerElement>& tower);

// Reduces a polynomial modulo ((1+X)^{p^n} - 1)/X, giving the representative
// comparable with solve_coleman output.
std::vector<PadicScalar> reduce_mod_levels(const std::vector<PadicScalar>& poly, long p, int levels);
std::vector<PadicScalar> poly_multiply(const std::vector<PadicScalar>& a, const std::vector<PadicScalar>& b);
// g((1+X)^u - 1) for a polynomial g and an integer u >= 0.
std::vector<PadicScalar> compose_with_multiplication(const std::vector<PadicScalar>& g, long u);
// Same, reduced modulo ((1+X)^{p^n} - 1)/X throughout; u only matters modulo p^n.
std::vector<PadicScalar> compose_with_multiplication(const std::vector<PadicScalar>& g, long u, long p, int levels);

// log g(X) - (1/p) log g((1+X)^p - 1) on the unit part g / X^nu, truncated at
// degree M. Throws "integrality-violation" if a coefficient is provably non-integral.
IwasawaSeries log_tilde(const ColemanSeries& g, int M = 12);
// Coefficients of log_tilde, i.e. the moments int binom(x, k) d mu for k <= k_max.
std::vector<PadicScalar> measure_moments(const ColemanSeries& g, int k_max);

struct ConstantCheck {
    std::string name;
    PadicScalar lhs;
    PadicScalar rhs;
    int residual = 0;
    int required = 0;
    bool pass = false;
};

// Split case: rec ^ Col~ on pi ^ u with pi = p w, u a unit, from the tower
// (rec(u^{-1}) - 1) pi~, against (1 - 1/p) (ord ^ log)(pi ^ u).
ConstantCheck col_split_check(long p, const mpz_class& w, const mpz_class& u, int levels, int N);

// Non-split case at a v with chi(Frob_v) = zeta_d^e (d | p^F - 1): the bottom of the
// Coleman map on the chi-part of O_H^x, H unramified of degree F, computed with the
// true Frobenius of H and a linear solve of (1 - phi^{-1}) y = e_chi log u, against
// (1 - chi(v)/p)(1 - chi(v)^{-1})^{-1} e_chi log u. u is given by its coefficients in W_F.
ConstantCheck col_nonsplit_check(long p, int F, int d, int e, const std::vector<mpz_class>& u, int N);

struct ColConstantReport {
    std::vector<ConstantCheck> checks;
    bool all_pass() const;
};

ColConstantReport col_constant_checks(long p, int levels, int N);

}  // namespace padiclz
