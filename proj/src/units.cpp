#include "padiclz/units.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "padiclz/error.hpp"
#include "padiclz/lfun.hpp"
#include "padiclz/numtheory.hpp"

namespace padiclz {

namespace {

CycInt character_sum(long m, const std::vector<std::pair<long, mpz_class>>& terms) {
    std::vector<mpz_class> c(m, 0);
    for (const auto& [e, k] : terms) c[nt::mod(e, m)] += k;
    return CycInt(m, std::move(c));
}

// Moves an element of Z_p sitting in an unramified context into W_1.
PadicScalar to_base(const PadicScalar& x, int N) {
    const ContextPtr c1 = PadicContext::get(x.prime(), 1, N);
    if (x.degree() == 1) return x.to_context(c1);
    if (!x.in_base_field()) throw Error("not-in-base-field", "embedded value is not in Q_p");
    if (x.is_zero()) return PadicScalar::zero(c1, std::min(N, x.precision()));
    return PadicScalar::from_vector(c1, Poly{x.unit()[0]}, std::min(N, x.precision()), x.valuation());
}

PadicScalar embed_base(const CycFrac& x, long p, int N) { return to_base(x.padic_embedding(p, N), N); }

mpz_class isqrt_exact(const mpz_class& n, bool& ok) {
    ok = false;
    if (n < 0) return 0;
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    ok = r * r == n;
    return r;
}

long squarefree_kernel(long n) {
    long r = n < 0 ? -1 : 1;
    for (const auto& [q, e] : nt::factor(n < 0 ? -n : n))
        if (e % 2) r *= q;
    return r;
}

long fundamental_discriminant(long n) {
    const long d = squarefree_kernel(n);
    return nt::mod(d, 4) == 1 ? d : 4 * d;
}

// Block polynomials for Morita's Gamma: G_k(y) = prod_{1<=j<=p^k, p does not divide j} (p^k y + j)
// mod p^N, truncated at degree N (coefficient i is divisible by p^{ki}).
struct GammaBlocks {
    long p;
    int N;
    mpz_class mod;
    std::vector<std::vector<mpz_class>> G;  // G[k], k >= 1; G[0] unused

    GammaBlocks(long p_, int N_) : p(p_), N(N_), mod(nt::ipow(p_, N_)) {
        G.resize(static_cast<size_t>(N) + 1);
        std::vector<mpz_class> g1{1};
        for (long j = 1; j < p; ++j) g1 = mul(g1, {mpz_class(j), mpz_class(p)});
        G[1] = g1;
        for (int k = 1; k < N; ++k) {
            std::vector<mpz_class> acc{1};
            for (long t = 0; t < p; ++t) acc = mul(acc, substitute(G[k], t));
            G[k + 1] = acc;
        }
    }

    std::vector<mpz_class> mul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) const {
        const size_t deg = std::min(a.size() + b.size() - 1, static_cast<size_t>(N) + 1);
        std::vector<mpz_class> r(deg, 0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size() && i + j < deg; ++j) r[i + j] += a[i] * b[j];
        for (auto& c : r) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
        return r;
    }

    // g(p y + t)
    std::vector<mpz_class> substitute(const std::vector<mpz_class>& g, long t) const {
        std::vector<mpz_class> r{0};
        const std::vector<mpz_class> lin{mpz_class(t), mpz_class(p)};
        for (size_t i = g.size(); i-- > 0;) {
            r = mul(r, lin);
            r[0] = (r[0] + g[i]) % mod;
        }
        return r;
    }

    mpz_class eval(int k, const mpz_class& y) const {
        mpz_class r = 0;
        const auto& g = G[k];
        for (size_t i = g.size(); i-- > 0;) {
            r = r * y + g[i];
            mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
        }
        return r;
    }
};

const GammaBlocks& gamma_blocks(long p, int N) {
    static std::mutex mu;
    static std::map<std::pair<long, int>, std::unique_ptr<GammaBlocks>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, N}];
    if (!slot) slot = std::make_unique<GammaBlocks>(p, N);
    return *slot;
}

DirichletCharacter power_residue_character(long p, int n) {
    if ((p - 1) % n != 0) throw Error("unsupported", "no character of this order mod p");
    const DirichletCharacter w = DirichletCharacter::teichmuller(p);
    std::vector<int> t(p, -1);
    for (long a = 1; a < p; ++a) t[a] = w.exponent(a) % n;
    return DirichletCharacter(p, n, std::move(t));
}

std::pair<long, long> odd_even_discriminants(const HeckeSetup& s) {
    const long dq = quadratic_discriminant(s.chi_q);
    const long twin = fundamental_discriminant(dq * s.disc);
    return dq < 0 ? std::make_pair(dq, twin) : std::make_pair(twin, dq);
}

// Generator of P^m in Q(sqrt(D)) from a primitive solution of a^2 - D b^2 = +-4 p^m.
bool norm_solution(long D, long p, int m, long s_limit, mpz_class& a, mpz_class& b) {
    const mpz_class target = 4 * nt::ipow(p, m);
    for (long bb = 1; bb <= s_limit; ++bb) {
        const mpz_class db2 = mpz_class(D) * bb * bb;
        if (D < 0 && -db2 > target) return false;
        for (int sign : {1, -1}) {
            if (D < 0 && sign < 0) continue;
            bool ok = false;
            const mpz_class aa = isqrt_exact(db2 + sign * target, ok);
            if (!ok) continue;
            if (aa % p == 0 && bb % p == 0) continue;
            a = aa;
            b = bb;
            return true;
        }
    }
    return false;
}

CycFrac quadratic_element(long D, const mpz_class& a, const mpz_class& b) {
    const long m = D < 0 ? -D : D;
    CycFrac r{CycInt::integer(m, a) + sqrt_discriminant(D) * b, 2};
    r.normalize();
    return r;
}

// sigma(x) for the nontrivial automorphism of Q(sqrt(D)) inside Q(zeta_|D|).
CycFrac quadratic_conjugate(const CycFrac& x, long D) {
    const long m = D < 0 ? -D : D;
    for (long a = 2; a < m; ++a)
        if (nt::gcd(a, m) == 1 && nt::kronecker(D, a) == -1) return x.galois(a);
    throw Error("degenerate-field", "no nontrivial automorphism");
}

PadicScalar det3(const PadicScalar m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

GaussSum gauss_sum(const DirichletCharacter& chi) {
    if (!chi.is_primitive()) throw Error("imprimitive-character", "Gauss sum needs a primitive character");
    const long f = chi.modulus();
    const long n = chi.order();
    const long m = nt::lcm(f, n);
    std::vector<std::pair<long, mpz_class>> terms;
    for (long a = 1; a < f; ++a) {
        const int e = chi.exponent(a);
        if (e >= 0) terms.push_back({(m / n) * e + (m / f) * a, 1});
    }
    return {chi, f, character_sum(m, terms)};
}

CycInt jacobi_sum(const DirichletCharacter& a, const DirichletCharacter& b) {
    const long p = a.modulus();
    if (b.modulus() != p || !nt::is_prime(p)) throw Error("invalid-character", "Jacobi sum needs one prime modulus");
    const long m = nt::lcm(a.order(), b.order());
    std::vector<std::pair<long, mpz_class>> terms;
    for (long x = 2; x < p; ++x)
        terms.push_back({(m / a.order()) * a.exponent(x) + (m / b.order()) * b.exponent(1 - x + p), 1});
    return character_sum(m, terms);
}

int stickelberger_exponent(long p, long a, long b) {
    a = nt::mod(a, p - 1);
    b = nt::mod(b, p - 1);
    if (a == 0 || b == 0 || (a + b) % (p - 1) == 0)
        throw Error("degenerate-jacobi", "need nontrivial characters with nontrivial product");
    return a + b >= p - 1 ? 1 : 0;
}

PadicScalar teichmuller_jacobi_sum(long p, long a, long b, int N) {
    stickelberger_exponent(p, a, b);
    const DirichletCharacter w = DirichletCharacter::teichmuller(p);
    return to_base(jacobi_sum(w.pow(-a), w.pow(-b)).padic_embedding(p, N), N);
}

PadicScalar gross_koblitz_jacobi(long p, long a, long b, int N) {
    a = nt::mod(a, p - 1);
    b = nt::mod(b, p - 1);
    const int s = stickelberger_exponent(p, a, b);
    const long c = (a + b) % (p - 1);
    const ContextPtr ctx = PadicContext::get(p, 1, N);
    auto gam = [&](long k) { return morita_gamma(PadicScalar::from_rational(ctx, mpq_class(k, p - 1))); };
    const PadicScalar r = gam(a) * gam(b) / gam(c);
    // pi^{p-1} = -p
    return s == 0 ? -r : r.mul_pow_p(1);
}

PadicScalar morita_gamma_integer(long p, const mpz_class& n, int N) {
    if (N < 1) throw Error("precision-starvation", "Gamma_p needs at least one digit");
    const ContextPtr ctx = PadicContext::get(p, 1, N);
    const mpz_class mod = nt::ipow(p, N);
    mpz_class nr;
    mpz_fdiv_r(nr.get_mpz_t(), n.get_mpz_t(), mod.get_mpz_t());
    if (nr == 0) return PadicScalar::one(ctx);
    const GammaBlocks& B = gamma_blocks(p, N);
    std::vector<long> digits;
    for (mpz_class r = nr - 1; r > 0; r /= p) digits.push_back(mpz_class(r % p).get_si());
    mpz_class prod = 1, offset = 0;
    for (int k = static_cast<int>(digits.size()) - 1; k >= 1; --k) {
        const mpz_class pk = nt::ipow(p, k);
        for (long t = 0; t < digits[k]; ++t) {
            prod = prod * B.eval(k, offset / pk) % mod;
            offset += pk;
        }
    }
    for (long t = 1; !digits.empty() && t <= digits[0]; ++t)
        if ((offset + t) % p != 0) prod = prod * (offset + t) % mod;
    if (mpz_odd_p(nr.get_mpz_t())) prod = -prod;
    return PadicScalar::from_integer(ctx, prod);
}

PadicScalar morita_gamma(const PadicScalar& x) {
    if (x.is_null()) throw Error("no-context", "uninitialized scalar");
    if (!x.is_integral()) throw Error("gamma-domain", "Gamma_p is defined on Z_p");
    const int M = x.precision();
    const PadicScalar xb = to_base(x, M);
    const PadicScalar g = morita_gamma_integer(x.prime(), xb.is_zero() ? mpz_class(0) : xb.to_integer(), M);
    return x.degree() == 1 ? g.to_context(x.context()) : g;
}

long class_number(long D) {
    if (D >= 0 || fundamental_discriminant(D) != D) throw Error("invalid-discriminant", "need a negative fundamental discriminant");
    long h = 0;
    for (long a = 1; 3 * a * a <= -D; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            if ((b * b - D) % (4 * a) != 0) continue;
            const long c = (b * b - D) / (4 * a);
            if (c < a || (a == c && b < 0)) continue;
            if (nt::gcd(nt::gcd(a, b < 0 ? -b : b), c) != 1) continue;
            ++h;
        }
    return h;
}

long quadratic_discriminant(const DirichletCharacter& chi) {
    const DirichletCharacter pr = chi.primitive();
    if (pr.is_trivial()) throw Error("unsupported-order", "trivial character");
    const long f = pr.conductor();
    const long D = pr.is_odd() ? -f : f;
    if (fundamental_discriminant(D) != D) throw Error("unsupported-order", "character is not quadratic");
    for (long a = 1; a < f; ++a) {
        const int e = pr.exponent(a);
        if (e < 0) continue;
        const int sign = 2 * e == pr.order() ? -1 : (e == 0 ? 1 : 0);
        if (sign == 0 || sign != nt::kronecker(D, a)) throw Error("unsupported-order", "character is not quadratic");
    }
    return D;
}

long odd_discriminant(const HeckeSetup& s) { return odd_even_discriminants(s).first; }

CycInt sqrt_discriminant(long D) {
    // The Gauss sum of the Kronecker character, kept at level |D| rather than lcm(|D|, 2).
    const long m = D < 0 ? -D : D;
    std::vector<std::pair<long, mpz_class>> terms;
    for (long a = 1; a < m; ++a)
        if (const long k = nt::kronecker(D, a); k != 0) terms.push_back({a, k});
    return character_sum(m, terms);
}

PUnit punit_from_generator(long D, long p, const mpq_class& a, const mpq_class& b) {
    if (nt::kronecker(D, p) != 1) throw Error("no split prime", "p does not split in Q(sqrt(" + std::to_string(D) + "))");
    const mpq_class a2 = 2 * a, b2 = 2 * b;
    if (a2.get_den() != 1 || b2.get_den() != 1) throw Error("stickelberger-mismatch", "generator coefficients must lie in (1/2)Z");
    const mpz_class an = a2.get_num(), bn = b2.get_num();
    // (an + bn sqrt(D))/2 is integral iff an^2 = D bn^2 mod 4; its norm is (an^2 - D bn^2)/4.
    const mpz_class n4 = an * an - D * bn * bn;
    if (n4 % 4 != 0) throw Error("stickelberger-mismatch", "generator is not integral");
    mpz_class norm = n4 / 4;
    int e = 0;
    while (norm % p == 0) {
        norm /= p;
        ++e;
    }
    if (norm != 1 || e == 0) throw Error("stickelberger-mismatch", "generator norm is not a power of p");
    if (an % p == 0 && bn % p == 0) throw Error("stickelberger-mismatch", "generator is divisible by p");
    // pi conj(pi) = p^e and p does not divide pi, so (pi) = P^e for one P | p.
    const CycFrac pi = quadratic_element(D, an, bn);
    const int v = embed_base(pi, p, e + 4).valuation();
    if (v != 0 && v != e) throw Error("stickelberger-mismatch", "unexpected valuation of pi");
    PUnit u;
    u.disc = D;
    u.value = pi / pi.conj();
    const CycFrac check = u.value * u.value.conj();
    if (!check.num.is_rational_integer() || check.num.coeffs()[0] != check.den)
        throw Error("stickelberger-mismatch", "conj(x) != 1/x");
    u.exp_p = v == e ? e : -e;
    u.exp_pc = -u.exp_p;
    u.class_no = D < 0 ? class_number(D) : 0;
    u.construction = "generator";
    return u;
}

PUnit stickelberger_punit(const HeckeSetup& s, int m) {
    const long D = odd_even_discriminants(s).first;
    const long p = s.p;
    if (nt::kronecker(D, p) != 1) throw Error("no split prime", "p does not split in Q(sqrt(" + std::to_string(D) + "))");
    const long h = class_number(D);
    const int e = static_cast<int>(h) * m;
    mpz_class a, b;
    if (!norm_solution(D, p, e, 1L << 40, a, b))
        throw Error("stickelberger-mismatch", "no primitive element of norm p^" + std::to_string(e));
    PUnit u = punit_from_generator(D, p, mpq_class(a, 2), mpq_class(b, 2));
    u.class_no = h;
    u.construction = "norm-equation";
    return u;
}

bool jacobi_route_available(const HeckeSetup& s) {
    const long D = odd_even_discriminants(s).first;
    return (D == -3 || D == -4) && nt::kronecker(D, s.p) == 1;
}

PUnit stickelberger_punit_jacobi(const HeckeSetup& s) {
    if (!jacobi_route_available(s)) throw Error("unsupported", "Jacobi route needs Q(sqrt(-3)) or Q(i) with p split");
    const long D = odd_even_discriminants(s).first;
    const int n = D == -3 ? 3 : 4;
    const DirichletCharacter alpha = power_residue_character(s.p, n);
    const CycInt J = jacobi_sum(alpha, alpha);
    if (J.norm() != s.p) throw Error("stickelberger-mismatch", "Jacobi sum norm is not p");
    const CycFrac pi = CycFrac::from(J);
    const int v = embed_base(pi, s.p, 5).valuation();
    if (v != 0 && v != 1) throw Error("stickelberger-mismatch", "unexpected valuation of J");
    PUnit u;
    u.disc = D;
    u.value = pi / pi.conj();
    u.exp_p = v == 1 ? 1 : -1;
    u.exp_pc = -u.exp_p;
    u.class_no = 1;
    u.construction = "jacobi-sum";
    return u;
}

PadicScalar l_invariant_cyclotomic(const HeckeSetup& s, const PUnit& u, int N) {
    const PadicScalar y = embed_base(u.value.conj(), s.p, N + 2);
    const int ord = y.valuation();
    if (ord == 0) throw Error("not-in-X-generically", "u has order 0 at the conjugate prime");
    if (ord != u.exp_pc) throw Error("stickelberger-mismatch", "embedded valuation disagrees with the divisor");
    const PadicScalar r = -log_iwasawa(y) / PadicScalar::from_long(y.context(), ord);
    return r.to_context(PadicContext::get(s.p, 1, N));
}

ChiUnitBasis chi_unit_basis(const HeckeSetup& s) {
    ChiUnitBasis B;
    std::tie(B.odd_disc, B.even_disc) = odd_even_discriminants(s);
    const long De = B.even_disc;
    B.elements.push_back(stickelberger_punit(s).value);
    B.labels.push_back("p-unit of Q(sqrt(" + std::to_string(B.odd_disc) + "))");

    // Fundamental unit (t + s sqrt(De))/2, t^2 - De s^2 = +-4.
    mpz_class t, u;
    bool found = false;
    for (long ss = 1; ss < (1L << 22) && !found; ++ss)
        for (int sign : {-1, 1}) {
            bool ok = false;
            const mpz_class tt = isqrt_exact(mpz_class(De) * ss * ss + 4 * sign, ok);
            if (ok) {
                t = tt;
                u = ss;
                found = true;
                break;
            }
        }
    if (!found) throw Error("unit-search-exhausted", "fundamental unit not found");
    const CycFrac eps = quadratic_element(De, t, u);
    B.elements.push_back(eps / quadratic_conjugate(eps, De));
    B.labels.push_back("fundamental unit of Q(sqrt(" + std::to_string(De) + "))");

    mpz_class a, b;
    int m = 1;
    for (; m <= 12; ++m)
        if (norm_solution(De, s.p, m, 1L << 22, a, b)) break;
    if (m > 12) throw Error("no split prime", "no p-unit found in the real quadratic twin");
    const CycFrac pi = quadratic_element(De, a, b);
    B.elements.push_back(pi / quadratic_conjugate(pi, De));
    B.labels.push_back("p-unit of Q(sqrt(" + std::to_string(De) + "))");
    return B;
}

DefinitionalLInvariant l_invariant_definitional(const HeckeSetup& s, const ChiUnitBasis& basis,
                                                const GammaWeights& w, int N) {
    if (basis.elements.size() != 3) throw Error("invalid-basis", "expected a basis of rank 3");
    const int W = N + 6;
    PadicScalar ord_m[3][3], cyc_m[3][3];
    for (int j = 0; j < 3; ++j) {
        const PadicScalar at_p = embed_base(basis.elements[j], s.p, W);
        const PadicScalar at_pc = embed_base(basis.elements[j].conj(), s.p, W);
        const ContextPtr ctx = at_p.context();
        ord_m[0][j] = cyc_m[0][j] = PadicScalar::from_long(ctx, at_p.valuation(), W);
        ord_m[1][j] = cyc_m[1][j] = log_iwasawa(at_p);
        ord_m[2][j] = PadicScalar::from_long(ctx, at_pc.valuation(), W);
        cyc_m[2][j] = -log_iwasawa(at_pc) * PadicScalar::from_long(ctx, kArtinSign);
    }
    DefinitionalLInvariant r;
    r.ord_det = det3(ord_m);
    if (r.ord_det.is_zero() || r.ord_det.relative_precision() < 2)
        throw Error("leopoldt-uncertifiable", "det(ord, log, ord) does not certify as nonzero");
    const ContextPtr ctx = r.ord_det.context()->with_precision(N);
    r.cyc_ratio = (det3(cyc_m) / r.ord_det).to_context(ctx);
    r.value = PadicScalar::from_rational(ctx, w.ord_weight);
    if (w.cyc_weight != 0) r.value += PadicScalar::from_rational(ctx, w.cyc_weight) * r.cyc_ratio;
    return r;
}

LeadingTermRatio leading_term_ratio(const HeckeSetup& s, int depth, int M, int N) {
    LeadingTermRatio r;
    r.l_invariant = l_invariant_cyclotomic(s, stickelberger_punit(s), N);
    const ContextPtr ctx = r.l_invariant.context();
    const KatzCyclotomic K = katz_cyclotomic(s, depth, M, N);
    r.katz = leading_term(K.series);
    if (r.katz.order != 1) throw Error("unexpected-order", "Katz series does not vanish to order exactly 1");
    r.katz_value = chi_cyc_evaluate(r.katz, ctx);
    const PadicScalar chi_p = to_base(chi_at_frobenius(s, s.p, 0, N).value, N).to_context(ctx);
    r.euler_factor = PadicScalar::one(ctx) - chi_p / PadicScalar::from_long(ctx, s.p);
    const PadicScalar arch = arch_value_at_zero(s.chi_q.inverse()).exact.padic_value(s.p, N).to_context(ctx);
    const PadicScalar v2 = K.second_reflected.coefficient(0).to_context(ctx);
    r.surrogate = arch * v2 / r.euler_factor;
    r.ratio = r.katz_value / (-r.l_invariant * r.euler_factor * r.surrogate);
    return r;
}

}  // namespace padiclz
