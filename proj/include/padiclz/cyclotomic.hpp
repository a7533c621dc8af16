#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

#include "padiclz/characters.hpp"
#include "padiclz/padic.hpp"

namespace padiclz {

// Exact element of Z[zeta_m] in the power basis 1, zeta, ..., zeta^{phi(m)-1}.
class CycInt {
public:
    CycInt() = default;
    explicit CycInt(long m);  // zero
    CycInt(long m, std::vector<mpz_class> coeffs);  // any length; reduced mod Phi_m

    static CycInt integer(long m, const mpz_class& n);
    static CycInt zeta_power(long m, long k);

    long level() const { return m_; }
    int degree() const { return static_cast<int>(c_.size()); }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    bool is_zero() const;
    bool is_rational_integer() const;

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator-() const;
    CycInt operator*(const CycInt& o) const;
    CycInt operator*(const mpz_class& k) const;
    bool operator==(const CycInt& o) const { return m_ == o.m_ && c_ == o.c_; }
    CycInt pow(long e) const;

    CycInt galois(long a) const;  // sigma_a: zeta -> zeta^a
    CycInt conj() const { return galois(-1); }
    mpz_class norm() const;       // N_{Q(zeta_m)/Q}
    CycInt lift(long m2) const;   // view in Z[zeta_{m2}] for m | m2

    std::complex<long double> complex_embedding(long k) const;  // zeta -> e^{2 pi i k / m}
    PadicScalar padic_embedding(long p, int N) const;           // zeta -> chosen root of order m

    std::string render() const;  // "[c0, c1, ...]"

private:
    long m_ = 1;
    std::vector<mpz_class> c_{0};
};

// x = num / den with den a positive integer.
struct CycFrac {
    CycInt num;
    mpz_class den = 1;

    static CycFrac from(const CycInt& x) { return {x, 1}; }
    CycFrac operator*(const CycFrac& o) const;
    CycFrac operator/(const CycFrac& o) const;
    CycFrac inverse() const;
    CycFrac galois(long a) const { return {num.galois(a), den}; }
    CycFrac conj() const { return galois(-1); }
    CycFrac pow(long e) const;
    mpq_class norm() const;
    std::complex<long double> complex_embedding(long k) const;
    PadicScalar padic_embedding(long p, int N) const;
    void normalize();
};

// (1 - zeta^a) / (1 - zeta) = 1 + zeta + ... + zeta^{a-1}.
CycFrac cyclotomic_unit(long a, long m);

// A formal Q(zeta_n)-linear combination sum_a c_a [sigma_a^{-1} x], i.e. the
// e_chi projection written multiplicatively, evaluated through logarithms.
struct ProjectedUnit {
    CycFrac base;
    std::vector<long> automorphisms;  // a in (Z/m)^x
    std::vector<CycRational> weights;  // c_a

    std::complex<long double> complex_log(long k) const;  // sum c_a log|iota_k(sigma_a^{-1} x)|
    PadicScalar padic_log(long p, int N) const;           // sum c_a log_p(iota_p(sigma_a^{-1} x))
};

// e_chi = (1/|G|) sum_{a in G} chi(a) sigma_a^{-1} on G = (Z/m)^x. With p > 0 the
// group order must be prime to p.
ProjectedUnit e_chi_project(const CycFrac& x, const DirichletCharacter& chi, long p = 0);

// log |iota_k(x)| with a bound on the floating-point error.
struct RealWithError {
    long double value = 0;
    long double error = 0;
};
RealWithError complex_log_abs(const CycFrac& x, long k);
PadicScalar padic_log_embed(const CycFrac& x, long p, int N);

}  // namespace padiclz
