#include "padiclz/numtheory.hpp"

#include <algorithm>
#include <deque>
#include <mutex>

#include "padiclz/error.hpp"

namespace padiclz::nt {

long gcd(long a, long b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long lcm(long a, long b) { return a / gcd(a, b) * b; }

long mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

long powmod(long a, long e, long m) {
    using u128 = unsigned __int128;
    if (m == 1) return 0;
    std::uint64_t base = static_cast<std::uint64_t>(mod(a, m));
    std::uint64_t r = 1;
    while (e > 0) {
        if (e & 1) r = static_cast<std::uint64_t>(static_cast<u128>(r) * base % static_cast<std::uint64_t>(m));
        base = static_cast<std::uint64_t>(static_cast<u128>(base) * base % static_cast<std::uint64_t>(m));
        e >>= 1;
    }
    return static_cast<long>(r);
}

long invmod(long a, long m) {
    long g = m, x = 0, x1 = 1, a1 = mod(a, m);
    while (a1 != 0) {
        long q = g / a1;
        long t = g - q * a1;
        g = a1;
        a1 = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw Error("not-invertible", std::to_string(a) + " mod " + std::to_string(m));
    return mod(x, m);
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::pair<long, int>> factor(long n) {
    std::vector<std::pair<long, int>> out;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        int k = 0;
        while (n % d == 0) {
            n /= d;
            ++k;
        }
        out.emplace_back(d, k);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

long euler_phi(long n) {
    long r = n;
    for (auto [q, k] : factor(n)) r = r / q * (q - 1);
    return r;
}

long multiplicative_order(long a, long n) {
    if (gcd(a, n) != 1) throw Error("not-invertible", "order of non-unit");
    long phi = euler_phi(n);
    long ord = phi;
    for (auto [q, k] : factor(phi)) {
        for (int i = 0; i < k; ++i) {
            if (powmod(a, ord / q, n) == 1)
                ord /= q;
            else
                break;
        }
    }
    return ord;
}

long primitive_root_prime_power(long q, int k) {
    long m = 1;
    for (int i = 0; i < k; ++i) m *= q;
    long phi = euler_phi(m);
    for (long g = 2; g < m; ++g) {
        if (gcd(g, m) != 1) continue;
        if (multiplicative_order(g, m) == phi) return g;
    }
    return 1;  // m == 2
}

long kronecker(long a, long n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    long result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int twos = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++twos;
    }
    if (twos > 0) {
        if (a % 2 == 0) return 0;
        long r8 = mod(a, 8);
        if ((twos & 1) && (r8 == 3 || r8 == 5)) result = -result;
    }
    // Jacobi symbol (a/n) for odd n.
    long aa = mod(a, n);
    while (aa != 0) {
        while (aa % 2 == 0) {
            aa /= 2;
            long r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(aa, n);
        if (aa % 4 == 3 && n % 4 == 3) result = -result;
        aa %= n;
    }
    return n == 1 ? result : 0;
}

long crt(long a, long m1, long b, long m2) {
    if (m1 == 1) return mod(b, m2);
    if (m2 == 1) return mod(a, m1);
    long t = mod((b - a) % m2 * invmod(m1 % m2, m2), m2);
    return mod(a + m1 * t, m1 * m2);
}

int valuation(const mpz_class& x, long p) {
    if (x == 0) return kInfiniteValuation;
    mpz_class y = x;
    int k = 0;
    while (mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(p));
        ++k;
    }
    return k;
}

int valuation(long x, long p) {
    if (x == 0) return kInfiniteValuation;
    int k = 0;
    while (x % p == 0) {
        x /= p;
        ++k;
    }
    return k;
}

mpz_class ipow(long p, int k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

mpz_class binomial(long n, long k) {
    if (k < 0) return 0;
    mpz_class r;
    if (n >= 0) {
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    } else {
        // binom(-m, k) = (-1)^k binom(m + k - 1, k)
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(-n + k - 1), static_cast<unsigned long>(k));
        if (k & 1) r = -r;
    }
    return r;
}

const mpq_class& bernoulli(int n) {
    static std::mutex mu;
    static std::deque<mpq_class> table{mpq_class(1)};
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(table.size()) <= n) {
        // sum_{j=0}^{m} binom(m+1, j) B_j = 0
        int m = static_cast<int>(table.size());
        mpq_class s = 0;
        for (int j = 0; j < m; ++j) s += mpq_class(binomial(m + 1, j)) * table[j];
        mpq_class b = -s / mpq_class(m + 1);
        b.canonicalize();
        table.push_back(b);
    }
    return table[n];
}

mpq_class bernoulli_poly(int n, const mpq_class& x) {
    mpq_class r = 0;
    mpq_class xp = 1;
    for (int j = n; j >= 0; --j) {
        r += mpq_class(binomial(n, j)) * bernoulli(j) * xp;
        xp *= x;
    }
    r.canonicalize();
    return r;
}

std::vector<long> divisors(long n) {
    std::vector<long> d;
    for (long i = 1; i * i <= n; ++i) {
        if (n % i) continue;
        d.push_back(i);
        if (i * i != n) d.push_back(n / i);
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<mpz_class> cyclotomic_polynomial(long m) {
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d, by exact long division.
    std::vector<mpz_class> num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (long d : divisors(m)) {
        if (d == m) continue;
        std::vector<mpz_class> den = cyclotomic_polynomial(d);
        std::vector<mpz_class> q(num.size() - den.size() + 1, 0);
        for (long i = static_cast<long>(q.size()) - 1; i >= 0; --i) {
            q[i] = num[i + den.size() - 1];
            for (size_t j = 0; j < den.size(); ++j) num[i + j] -= q[i] * den[j];
        }
        num = std::move(q);
    }
    return num;
}

}  // namespace padiclz::nt
