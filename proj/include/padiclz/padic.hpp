#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

namespace padiclz {

using Poly = std::vector<mpz_class>;

class PadicContext;
using ContextPtr = std::shared_ptr<const PadicContext>;

// Fixes p, the degree f of the unramified extension W_f and the working
// precision N. W_f is presented as Z_p[g]/(P(g)) where P is the minimal
// polynomial of the Teichmuller lift of a root of the lexicographically
// smallest monic irreducible polynomial of degree f over F_p. Because g is a
// root of unity, Frobenius is simply g -> g^p, and contexts with the same (p, f)
// but different N are mutually compatible.
class PadicContext {
public:
    static ContextPtr get(long p, int f, int N);

    long prime() const { return p_; }
    int degree() const { return f_; }
    int precision() const { return N_; }
    const mpz_class& ppow(int k) const;  // p^k for 0 <= k <= 4N + 64

    const Poly& defining_polynomial() const { return defpoly_; }        // c_0..c_f, monic, mod p^N
    const std::vector<long>& residue_polynomial() const { return resid_; }  // c_0..c_f mod p
    ContextPtr with_precision(int N) const { return get(p_, f_, N); }

    // Arithmetic on coefficient vectors (length f) modulo p^k, k <= N.
    Poly mul(const Poly& a, const Poly& b, int k) const;
    Poly add(const Poly& a, const Poly& b, int k) const;
    Poly reduce(const Poly& a, int k) const;
    Poly inverse_unit(const Poly& a, int k) const;
    Poly pow(const Poly& a, const mpz_class& e, int k) const;
    Poly frobenius(const Poly& a, int k) const;
    Poly teichmuller(const Poly& a, int k) const;  // a must be a unit
    bool is_unit(const Poly& a) const;             // reduction mod p nonzero
    Poly one() const;

    PadicContext(long p, int f, int N);

private:
    long p_;
    int f_;
    int N_;
    std::vector<mpz_class> pows_;
    Poly defpoly_;
    std::vector<long> resid_;
    std::vector<Poly> frob_;  // g^{p i} in the basis, mod p^N
};

// An element p^v * u of Frac(W_f) known modulo p^prec (absolute precision),
// where u is a unit of W_f. Zero is represented by an explicit flag, meaning
// "zero to the stated precision".
class PadicScalar {
public:
    PadicScalar() = default;

    static PadicScalar zero(const ContextPtr& ctx, int prec = -1);
    static PadicScalar one(const ContextPtr& ctx);
    static PadicScalar from_integer(const ContextPtr& ctx, const mpz_class& n, int prec = -1);
    static PadicScalar from_long(const ContextPtr& ctx, long n, int prec = -1);
    static PadicScalar from_rational(const ContextPtr& ctx, const mpq_class& q, int prec = -1);
    // p^shift * sum c_i g^i, known modulo p^prec.
    static PadicScalar from_vector(const ContextPtr& ctx, const Poly& c, int prec = -1, int shift = 0);
    static PadicScalar generator(const ContextPtr& ctx);

    const ContextPtr& context() const { return ctx_; }
    bool is_null() const { return !ctx_; }
    long prime() const;
    int degree() const;
    bool is_zero() const { return zero_; }
    int valuation() const;  // kInfiniteValuation for zero
    int precision() const { return prec_; }
    int relative_precision() const { return zero_ ? 0 : prec_ - val_; }
    const Poly& unit() const { return unit_; }
    bool is_integral() const { return zero_ || val_ >= 0; }
    bool is_unit() const { return !zero_ && val_ == 0; }

    // Coefficients of the value itself modulo p^prec (requires valuation >= 0).
    Poly to_vector() const;
    // The value as an integer modulo p^prec; requires f = 1 or an element of Z_p.
    mpz_class to_integer() const;
    bool in_base_field() const;  // all non-constant coefficients vanish to precision

    PadicScalar operator-() const;
    PadicScalar operator+(const PadicScalar& o) const;
    PadicScalar operator-(const PadicScalar& o) const;
    PadicScalar operator*(const PadicScalar& o) const;
    PadicScalar operator/(const PadicScalar& o) const;
    PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
    PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
    PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }
    PadicScalar& operator/=(const PadicScalar& o) { return *this = *this / o; }

    PadicScalar inverse() const;
    PadicScalar pow(long e) const;
    PadicScalar mul_pow_p(int k) const;                    // exact multiplication by p^k
    PadicScalar with_precision(int prec) const;            // never raises precision
    PadicScalar to_context(const ContextPtr& other) const;  // same (p, f), any N

    std::string render() const;

private:
    ContextPtr ctx_;
    bool zero_ = true;
    int val_ = 0;
    int prec_ = 0;
    Poly unit_;

    static PadicScalar normalize(const ContextPtr& ctx, Poly c, int shift, int prec);
    void check_same(const PadicScalar& o) const;
};

// Valuation of a - b, capped at the smaller of the two precisions.
int residual_valuation(const PadicScalar& a, const PadicScalar& b);

PadicScalar teichmuller(const PadicScalar& a);
PadicScalar teichmuller(const ContextPtr& ctx, const mpz_class& a);
PadicScalar log_iwasawa(const PadicScalar& x);
PadicScalar exp_p(const PadicScalar& x);
PadicScalar frobenius(const PadicScalar& x, int times = 1);

// Finds a/b * p^v with |a|, |b| <= sqrt(p^r / 2) matching x to its relative
// precision r (Wang's reconstruction). Returns false when no such pair exists.
// Requires x in Q_p (degree 1 or an element of the base field).
bool rational_reconstruct(const PadicScalar& x, mpq_class& out);

// Base-p digits of n mod p^k, lowest first, joined with '.'.
std::string render_digits(const mpz_class& n, long p, int k);

}  // namespace padiclz
