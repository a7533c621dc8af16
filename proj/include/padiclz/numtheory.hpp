#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace padiclz::nt {

long gcd(long a, long b);
long lcm(long a, long b);
long mod(long a, long m);  // representative in [0, m)
long powmod(long a, long e, long m);
long invmod(long a, long m);  // throws Error("not-invertible")
bool is_prime(long n);
std::vector<std::pair<long, int>> factor(long n);
long euler_phi(long n);
long multiplicative_order(long a, long n);
// Smallest generator of (Z/q^k)^x for an odd prime q.
long primitive_root_prime_power(long q, int k);
long kronecker(long a, long n);
// x = a mod m1, x = b mod m2 with gcd(m1, m2) = 1; result in [0, m1*m2).
long crt(long a, long m1, long b, long m2);

int valuation(const mpz_class& x, long p);  // large sentinel for 0
int valuation(long x, long p);
mpz_class ipow(long p, int k);

// Exact Bernoulli numbers with B_1 = -1/2.
const mpq_class& bernoulli(int n);
// B_n(x) for rational x.
mpq_class bernoulli_poly(int n, const mpq_class& x);
mpz_class binomial(long n, long k);
std::vector<long> divisors(long n);  // ascending
// Integer coefficients of Phi_m, lowest degree first.
std::vector<mpz_class> cyclotomic_polynomial(long m);

constexpr int kInfiniteValuation = 1 << 28;

}  // namespace padiclz::nt
