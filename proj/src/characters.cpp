#include "padiclz/characters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <regex>

#include "padiclz/error.hpp"
#include "padiclz/numtheory.hpp"

namespace padiclz {

namespace {

// Residue-level arithmetic in F_q = W_F / p.
struct ResidueField {
    ContextPtr ctx;
    Poly mul(const Poly& a, const Poly& b) const { return ctx->mul(a, b, 1); }
    Poly pow(const Poly& a, long e) const { return ctx->pow(a, mpz_class(e), 1); }
    bool is_one(const Poly& a) const {
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != (i == 0 ? 1 : 0)) return false;
        return true;
    }
};

std::vector<long> to_longs(const Poly& a) {
    std::vector<long> r;
    for (const auto& x : a) r.push_back(x.get_si());
    return r;
}

Poly from_longs(const std::vector<long>& a) {
    Poly r;
    for (long x : a) r.emplace_back(x);
    return r;
}

int residue_degree(long p, int n) { return static_cast<int>(nt::multiplicative_order(p, n)); }

struct Component {
    long qk = 1;       // prime-power modulus of the factor
    long order = 1;    // order of the cyclic factor
    long element = 1;  // generator, as a residue mod the full modulus
    std::vector<int> dlog;  // indexed by a mod qk, -1 for non-units
};

std::vector<Component> components(long f) {
    std::vector<Component> out;
    for (auto [q, k] : nt::factor(f)) {
        const long qk = nt::ipow(q, k).get_si();
        const long rest = f / qk;
        auto lift = [&](long r) { return rest == 1 ? nt::mod(r, qk) : nt::crt(nt::mod(r, qk), qk, 1, rest); };
        if (q == 2) {
            if (k == 1) continue;
            Component sign;
            sign.qk = qk;
            sign.order = 2;
            sign.element = lift(-1);
            sign.dlog.assign(qk, -1);
            Component five;
            five.qk = qk;
            five.order = qk / 4;
            five.element = lift(5);
            five.dlog.assign(qk, -1);
            long x = 1;
            for (long t = 0; t < five.order; ++t) {
                sign.dlog[x] = 0;
                sign.dlog[qk - x] = 1;
                five.dlog[x] = static_cast<int>(t);
                five.dlog[qk - x] = static_cast<int>(t);
                x = x * 5 % qk;
            }
            out.push_back(std::move(sign));
            if (five.order > 1) out.push_back(std::move(five));
        } else {
            Component c;
            c.qk = qk;
            c.order = nt::euler_phi(qk);
            const long g = nt::primitive_root_prime_power(q, k);
            c.element = lift(g);
            c.dlog.assign(qk, -1);
            long x = 1;
            for (long t = 0; t < c.order; ++t) {
                c.dlog[x] = static_cast<int>(t);
                x = x * g % qk;
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

// Divides the order by the gcd of all exponents so that n is exact.
void reduce_order(int& n, std::vector<int>& table) {
    long g = n;
    for (int e : table)
        if (e > 0) g = nt::gcd(g, e);
    if (g <= 1) return;
    n = static_cast<int>(n / g);
    for (int& e : table)
        if (e > 0) e = static_cast<int>(e / g);
}

}  // namespace

namespace {

// Generator gamma_F of F_{p^F}^x: the smallest primitive root for F = 1, and
// for F > 1 the lexicographically smallest coefficient vector (c_0 first) of
// a generator whose norm to F_p is gamma_1. All chosen roots of unity are
// powers of these, which keeps realizations compatible under order changes.
Poly field_generator(long p, int F) {
    ResidueField R{PadicContext::get(p, F, 1)};
    const mpz_class q = nt::ipow(p, F);
    std::vector<long> primes;
    for (auto [l, k] : nt::factor(mpz_class(q - 1).get_si())) primes.push_back(l);
    const mpz_class norm_exp = (q - 1) / (p - 1);
    Poly g1;
    if (F > 1) {
        g1.assign(F, 0);
        g1[0] = field_generator(p, 1)[0];
    }
    std::vector<long> c(F, 0);
    while (true) {
        int i = F - 1;
        while (i >= 0 && ++c[i] == p) c[i--] = 0;
        if (i < 0) throw Error("internal", "no generator found");
        const Poly y = from_longs(c);
        bool ok = true;
        for (long l : primes)
            if (R.is_one(R.ctx->pow(y, (q - 1) / l, 1))) ok = false;
        if (ok && F > 1 && R.ctx->pow(y, norm_exp, 1) != g1) ok = false;
        if (ok) return y;
    }
}

}  // namespace

std::vector<long> chosen_root_residue(long p, int n) {
    static std::mutex mu;
    static std::map<std::pair<long, int>, std::vector<long>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({p, n});
        if (it != cache.end()) return it->second;
    }
    if (n < 1 || n % p == 0) throw Error("order-divisible-by-p", "root order " + std::to_string(n));
    const int F = residue_degree(p, n);
    ResidueField R{PadicContext::get(p, F, 1)};
    const mpz_class q = nt::ipow(p, F);
    const std::vector<long> root = to_longs(R.ctx->pow(field_generator(p, F), (q - 1) / n, 1));
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_pair(p, n), root);
    return root;
}

RootOfUnity chosen_root_of_unity(long p, int n, int N) {
    static std::mutex mu;
    static std::map<std::tuple<long, int, int>, RootOfUnity> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({p, n, N});
        if (it != cache.end()) return it->second;
    }
    RootOfUnity r;
    r.order = n;
    r.ctx = PadicContext::get(p, residue_degree(p, n), N);
    r.zeta = teichmuller(PadicScalar::from_vector(r.ctx, from_longs(chosen_root_residue(p, n))));
    r.powers.push_back(PadicScalar::one(r.ctx));
    for (int k = 1; k < n; ++k) r.powers.push_back(r.powers.back() * r.zeta);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_tuple(p, n, N), r);
    return r;
}

// ---------------------------------------------------------------------------

bool CycRational::is_rational() const {
    if (order == 1) return true;
    auto phi = nt::cyclotomic_polynomial(order);
    std::vector<mpq_class> r = coeffs;
    r.resize(std::max<size_t>(r.size(), phi.size()), 0);
    const size_t d = phi.size() - 1;
    for (size_t i = r.size(); i-- > d;) {
        if (r[i] == 0) continue;
        const mpq_class c = r[i];
        for (size_t j = 0; j <= d; ++j) r[i - d + j] -= c * mpq_class(phi[j]);
    }
    for (size_t i = 1; i < d; ++i)
        if (r[i] != 0) return false;
    return true;
}

mpq_class CycRational::rational() const {
    if (order == 1) return coeffs.empty() ? mpq_class(0) : coeffs[0];
    auto phi = nt::cyclotomic_polynomial(order);
    std::vector<mpq_class> r = coeffs;
    r.resize(std::max<size_t>(r.size(), phi.size()), 0);
    const size_t d = phi.size() - 1;
    for (size_t i = r.size(); i-- > d;) {
        if (r[i] == 0) continue;
        const mpq_class c = r[i];
        for (size_t j = 0; j <= d; ++j) r[i - d + j] -= c * mpq_class(phi[j]);
    }
    return r[0];
}

std::complex<double> CycRational::complex_value() const {
    std::complex<double> z = 0;
    for (size_t e = 0; e < coeffs.size(); ++e) {
        if (coeffs[e] == 0) continue;
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(e) / order;
        z += coeffs[e].get_d() * std::polar(1.0, ang);
    }
    return z;
}

PadicScalar CycRational::padic_value(long p, int N) const {
    int loss = 0;
    for (const auto& c : coeffs)
        if (c != 0) loss = std::max(loss, nt::valuation(mpz_class(c.get_den()), p));
    const int W = N + loss + 2;
    RootOfUnity z = chosen_root_of_unity(p, order, W);
    PadicScalar acc = PadicScalar::zero(z.ctx);
    for (size_t e = 0; e < coeffs.size(); ++e) {
        if (coeffs[e] == 0) continue;
        acc += PadicScalar::from_rational(z.ctx, coeffs[e]) * z.powers[e % order];
    }
    return acc.to_context(z.ctx->with_precision(N));
}

// ---------------------------------------------------------------------------

DirichletCharacter::DirichletCharacter(long modulus, int order, std::vector<int> table)
    : f_(modulus), n_(order), table_(std::move(table)) {
    if (f_ < 1 || n_ < 1 || static_cast<long>(table_.size()) != f_)
        throw Error("invalid-character", "table size must equal the modulus");
    for (long a = 0; a < f_; ++a) {
        const bool unit = nt::gcd(a, f_) == 1;
        if (unit != (table_[a] >= 0)) throw Error("invalid-character", "support must be the units");
        if (unit && table_[a] >= n_) throw Error("invalid-character", "exponent out of range");
    }
    for (long a = 0; a < f_; ++a) {
        if (table_[a] < 0) continue;
        for (long b = a; b < f_; ++b) {
            if (table_[b] < 0) continue;
            if (table_[a * b % f_] != (table_[a] + table_[b]) % n_)
                throw Error("invalid-character", "table is not multiplicative");
        }
    }
    reduce_order(n_, table_);
}

DirichletCharacter DirichletCharacter::trivial(long modulus) {
    std::vector<int> t(modulus);
    for (long a = 0; a < modulus; ++a) t[a] = nt::gcd(a, modulus) == 1 ? 0 : -1;
    return DirichletCharacter(modulus, 1, t);
}

long DirichletCharacter::dual_group_size(long modulus) { return nt::euler_phi(modulus); }

DirichletCharacter DirichletCharacter::from_index(long modulus, long index) {
    if (modulus < 1) throw Error("invalid-character", "modulus must be positive");
    if (index < 1 || index > dual_group_size(modulus))
        throw Error("invalid-character", "index out of range 1.." + std::to_string(dual_group_size(modulus)));
    auto comps = components(modulus);
    long rest = index - 1;
    std::vector<long> x;
    long exponent = 1;
    for (const auto& c : comps) {
        x.push_back(rest % c.order);
        rest /= c.order;
        exponent = nt::lcm(exponent, c.order);
    }
    std::vector<int> t(modulus, -1);
    for (long a = 0; a < modulus; ++a) {
        if (nt::gcd(a, modulus) != 1) continue;
        long e = 0;
        for (size_t i = 0; i < comps.size(); ++i)
            e += x[i] * (exponent / comps[i].order) * comps[i].dlog[a % comps[i].qk];
        t[a] = static_cast<int>(e % exponent);
    }
    return DirichletCharacter(modulus, static_cast<int>(exponent), t);
}

long DirichletCharacter::index() const {
    auto comps = components(f_);
    long idx = 0, scale = 1;
    for (const auto& c : comps) {
        const long e = exponent(c.element);
        const long x = e * c.order / n_;
        idx += x * scale;
        scale *= c.order;
    }
    return idx + 1;
}

std::string DirichletCharacter::spec_string() const {
    return "chi{modulus=" + std::to_string(f_) + ", index=" + std::to_string(index()) + "}";
}

DirichletCharacter DirichletCharacter::parse(const std::string& spec) {
    static const std::regex re(R"(\s*chi\s*\{\s*modulus\s*=\s*(\d+)\s*,\s*index\s*=\s*(\d+)\s*\}\s*)");
    std::smatch m;
    if (!std::regex_match(spec, m, re)) throw Error("invalid-character-spec", spec);
    return from_index(std::stol(m[1]), std::stol(m[2]));
}

DirichletCharacter DirichletCharacter::kronecker(long D) {
    const long f = D < 0 ? -D : D;
    std::vector<int> t(f, -1);
    for (long a = 0; a < f; ++a) {
        if (nt::gcd(a, f) != 1) continue;
        t[a] = nt::kronecker(D, a) == 1 ? 0 : 1;
    }
    return DirichletCharacter(f, 2, t);
}

DirichletCharacter DirichletCharacter::teichmuller(long p) {
    const long g = chosen_root_residue(p, static_cast<int>(p - 1)).at(0);
    std::vector<int> t(p, -1);
    long x = 1;
    for (long k = 0; k < p - 1; ++k) {
        t[x] = static_cast<int>(k);
        x = x * g % p;
    }
    return DirichletCharacter(p, static_cast<int>(p - 1), t);
}

int DirichletCharacter::exponent(long a) const { return table_[nt::mod(a, f_)]; }

long DirichletCharacter::conductor() const {
    for (long d : nt::divisors(f_)) {
        bool ok = true;
        for (long a = 1; a < f_ && ok; a += d)
            if (table_[a] > 0) ok = false;
        if (ok) return d;
    }
    return f_;
}

DirichletCharacter DirichletCharacter::primitive() const {
    const long d = conductor();
    std::vector<int> t(d, -1);
    for (long b = 0; b < d; ++b) {
        if (nt::gcd(b, d) != 1) continue;
        for (long a = b; a < f_ + d * f_; a += d) {
            if (nt::gcd(a, f_) == 1) {
                t[b] = exponent(a);
                break;
            }
        }
        if (d == 1) t[0] = 0;
    }
    return DirichletCharacter(d, n_, t);
}

DirichletCharacter DirichletCharacter::induced(long modulus) const {
    if (modulus % f_ != 0) throw Error("invalid-character", "induction needs a multiple of the modulus");
    std::vector<int> t(modulus, -1);
    for (long a = 0; a < modulus; ++a)
        if (nt::gcd(a, modulus) == 1) t[a] = exponent(a);
    return DirichletCharacter(modulus, n_, t);
}

DirichletCharacter DirichletCharacter::inverse() const { return pow(-1); }

DirichletCharacter DirichletCharacter::pow(long k) const {
    std::vector<int> t = table_;
    for (int& e : t)
        if (e >= 0) e = static_cast<int>(nt::mod(static_cast<long>(e) * k, n_));
    return DirichletCharacter(f_, n_, t);
}

std::complex<double> DirichletCharacter::complex_value(long a) const {
    const int e = exponent(a);
    if (e < 0) return 0.0;
    return std::polar(1.0, 2.0 * std::numbers::pi * e / n_);
}

RootOfUnity DirichletCharacter::realization(long p, int N) const {
    if (n_ % p == 0) throw Error("order-divisible-by-p", "character order " + std::to_string(n_));
    return chosen_root_of_unity(p, n_, N);
}

PadicScalar DirichletCharacter::padic_value(long a, long p, int N) const {
    RootOfUnity r = realization(p, N);
    const int e = exponent(a);
    if (e < 0) return PadicScalar::zero(r.ctx);
    return r.powers[e];
}

bool DirichletCharacter::operator==(const DirichletCharacter& o) const {
    return f_ == o.f_ && n_ == o.n_ && table_ == o.table_;
}

DirichletCharacter padic_product(const DirichletCharacter& a, const DirichletCharacter& b, long p) {
    const long L = nt::lcm(a.modulus(), b.modulus());
    const int n = static_cast<int>(nt::lcm(a.order(), b.order()));
    if (n % p == 0) throw Error("order-divisible-by-p", "product order " + std::to_string(n));
    const int F = residue_degree(p, n);
    const int Fa = residue_degree(p, a.order()), Fb = residue_degree(p, b.order());
    if ((Fa != F && Fa != 1) || (Fb != F && Fb != 1))
        throw Error("incompatible-realizations", "factors live in different unramified extensions");
    ResidueField R{PadicContext::get(p, F, 1)};
    auto embed = [&](const std::vector<long>& r) {
        Poly v(F, 0);
        for (size_t i = 0; i < r.size(); ++i) v[i] = r[i];
        return v;
    };
    const Poly za = embed(chosen_root_residue(p, a.order()));
    const Poly zb = embed(chosen_root_residue(p, b.order()));
    std::map<std::vector<long>, int> dlog;
    {
        const Poly z = embed(chosen_root_residue(p, n));
        Poly cur(F, 0);
        cur[0] = 1;
        for (int k = 0; k < n; ++k) {
            dlog[to_longs(cur)] = k;
            cur = R.mul(cur, z);
        }
    }
    std::vector<int> t(L, -1);
    for (long x = 0; x < L; ++x) {
        if (nt::gcd(x, L) != 1) continue;
        Poly v = R.mul(R.pow(za, a.exponent(x)), R.pow(zb, b.exponent(x)));
        auto it = dlog.find(to_longs(v));
        if (it == dlog.end()) throw Error("internal", "product value is not a root of the expected order");
        t[x] = it->second;
    }
    return DirichletCharacter(L, n, t);
}

DirichletCharacter twist_by_teichmuller(const DirichletCharacter& chi, long j, long p) {
    const DirichletCharacter w = DirichletCharacter::teichmuller(p);
    return padic_product(chi, w.pow(nt::mod(j, p - 1)), p);
}

CycRational bernoulli_general(const DirichletCharacter& chi, int n) {
    if (n < 1) throw Error("invalid-argument", "Bernoulli index must be positive");
    CycRational r;
    r.order = chi.order();
    r.coeffs.assign(chi.order(), 0);
    const long f = chi.modulus();
    const mpq_class scale(nt::ipow(f, n - 1));
    for (long a = 1; a <= f; ++a) {
        const int e = chi.exponent(a);
        if (e < 0) continue;
        r.coeffs[e] += scale * nt::bernoulli_poly(n, mpq_class(a, f));
    }
    for (auto& c : r.coeffs) c.canonicalize();
    return r;
}

// ---------------------------------------------------------------------------

namespace {

bool is_fundamental_discriminant(long D) {
    auto squarefree = [](long m) {
        for (auto [q, k] : nt::factor(m < 0 ? -m : m))
            if (k > 1) return false;
        return true;
    };
    if (D == 1 || D == 0) return false;
    if (nt::mod(D, 4) == 1) return squarefree(D);
    if (nt::mod(D, 4) != 0) return false;
    const long m = D / 4;
    return (nt::mod(m, 4) == 2 || nt::mod(m, 4) == 3) && squarefree(m);
}

}  // namespace

HeckeSetup HeckeSetup::make(long disc, long p, const DirichletCharacter& chi_q) {
    if (disc >= 0 || !is_fundamental_discriminant(disc))
        throw Error("invalid-field", "need a negative fundamental discriminant, got " + std::to_string(disc));
    if (p <= 3 || !nt::is_prime(p)) throw Error("invalid-prime", "need a prime p > 3");
    if (nt::kronecker(disc, p) != 1) throw Error("p-not-split", std::to_string(p) + " does not split");
    if (chi_q.is_trivial()) throw Error("trivial-character", "branch character must be non-trivial");
    HeckeSetup s;
    s.disc = disc;
    s.p = p;
    s.chi_q = chi_q;
    s.eps_k = DirichletCharacter::kronecker(disc);
    if (chi_q.primitive() == s.eps_k.primitive())
        throw Error("trivial-character", "base change of eps_k is trivial");
    if (chi_q.order() % p == 0) throw Error("order-divisible-by-p", "character order must be prime to p");
    if (chi_q.conductor() % p == 0) throw Error("p-ramified-in-L", "p divides the conductor");
    return s;
}

FrobeniusValue chi_at_frobenius(const HeckeSetup& s, long ell, int which, int N) {
    if (!nt::is_prime(ell)) throw Error("invalid-prime", std::to_string(ell));
    if (which != 0 && which != 1) throw Error("invalid-argument", "prime selector must be 0 or 1");
    const DirichletCharacter chi = s.chi_q.primitive();
    if (chi.modulus() % ell == 0) throw Error("frobenius-undefined", "v is ramified in L/k");
    const long kr = nt::kronecker(s.disc, ell);
    if (kr != 1 && which == 1) throw Error("invalid-argument", "only split primes have a conjugate");
    const long norm = kr == -1 ? ell * ell : ell;
    FrobeniusValue v;
    v.exponent = chi.exponent(norm);
    v.order = chi.order();
    v.value = chi.padic_value(norm, s.p, N);
    return v;
}

int exceptional_count(const HeckeSetup& s) { return chi_at_frobenius(s, s.p, 1).is_one() ? 1 : 0; }

}  // namespace padiclz
