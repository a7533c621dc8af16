#include "padiclz/padic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "padiclz/error.hpp"
#include "padiclz/numtheory.hpp"

namespace padiclz {

namespace {

void reduce_mod(mpz_class& x, const mpz_class& m) { mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()); }

// Product of a and b (length f) modulo the monic polynomial m (length f+1) and modulo M.
Poly mulmod(const Poly& a, const Poly& b, const Poly& m, const mpz_class& M) {
    const size_t f = m.size() - 1;
    if (f == 1) {
        mpz_class r = a[0] * b[0];
        reduce_mod(r, M);
        return {r};
    }
    Poly r(2 * f - 1, 0);
    for (size_t i = 0; i < f; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < f; ++j) r[i + j] += a[i] * b[j];
    }
    for (size_t i = 2 * f - 2; i >= f; --i) {
        if (r[i] == 0) continue;
        reduce_mod(r[i], M);
        const mpz_class c = r[i];
        for (size_t j = 0; j < f; ++j) r[i - f + j] -= c * m[j];
    }
    r.resize(f);
    for (auto& x : r) reduce_mod(x, M);
    return r;
}

// Arithmetic in F_p[x] with coefficient vectors, lowest degree first.
using FpPoly = std::vector<long>;

void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, long p) {
    fp_trim(a);
    const long inv = nt::invmod(m.back(), p);
    while (a.size() >= m.size()) {
        const long c = a.back() * inv % p;
        const size_t shift = a.size() - m.size();
        for (size_t j = 0; j < m.size(); ++j) a[shift + j] = nt::mod(a[shift + j] - c * m[j], p);
        fp_trim(a);
    }
    return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, long p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return fp_mod(r, m, p);
}

FpPoly fp_gcd(FpPoly a, FpPoly b, long p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Rabin-style test: m of degree f is irreducible iff gcd(x^{p^i} - x, m) = 1 for i <= f/2.
bool fp_irreducible(const FpPoly& m, long p) {
    const size_t f = m.size() - 1;
    if (f == 1) return true;
    FpPoly xp = {0, 1};
    for (size_t i = 1; i <= f / 2; ++i) {
        // xp <- xp^p mod m
        FpPoly base = xp, acc = {1};
        for (long e = p; e > 0; e >>= 1) {
            if (e & 1) acc = fp_mulmod(acc, base, m, p);
            base = fp_mulmod(base, base, m, p);
        }
        xp = acc;
        FpPoly d = xp;
        d.resize(std::max<size_t>(d.size(), 2), 0);
        d[1] = nt::mod(d[1] - 1, p);
        if (fp_gcd(m, d, p).size() > 1) return false;
    }
    return true;
}

FpPoly smallest_irreducible(long p, int f) {
    if (f == 1) return {0, 1};
    // Coefficients (c_0, ..., c_{f-1}) in lexicographic order with c_0 most significant.
    std::vector<long> c(f, 0);
    c[0] = 1;
    while (true) {
        FpPoly m(c.begin(), c.end());
        m.push_back(1);
        if (fp_irreducible(m, p)) return m;
        int i = f - 1;
        while (i >= 0 && ++c[i] == p) c[i--] = 0;
        if (i < 0) throw Error("no-irreducible", "exhausted search");
    }
}

}  // namespace

PadicContext::PadicContext(long p, int f, int N) : p_(p), f_(f), N_(N) {
    if (!nt::is_prime(p)) throw Error("invalid-prime", std::to_string(p));
    if (f < 1 || N < 1) throw Error("invalid-context", "degree and precision must be positive");
    const int cap = 4 * N + 64;
    pows_.resize(cap + 1);
    pows_[0] = 1;
    for (int k = 1; k <= cap; ++k) pows_[k] = pows_[k - 1] * p;

    FpPoly res = smallest_irreducible(p, f);
    const mpz_class& M = pows_[N];
    if (f == 1) {
        defpoly_ = {0, 1};
    } else {
        Poly mod(res.begin(), res.end());
        // Teichmuller lift t of x in Z/p^N[x]/(res): t = lim x^{q^n}.
        mpz_class q = nt::ipow(p, f);
        Poly t(f, 0);
        t[1] = 1;
        for (int it = 0; it < N; ++it) {
            Poly base = t, acc(f, 0);
            acc[0] = 1;
            for (size_t b = mpz_sizeinbase(q.get_mpz_t(), 2); b-- > 0;) {
                acc = mulmod(acc, acc, mod, M);
                if (mpz_tstbit(q.get_mpz_t(), b)) acc = mulmod(acc, base, mod, M);
            }
            t = acc;
        }
        // G(X) = prod_i (X - t^{p^i}), coefficients in the ring; they are constants.
        std::vector<Poly> G{Poly(f, 0)};
        G[0][0] = 1;
        Poly root = t;
        for (int i = 0; i < f; ++i) {
            std::vector<Poly> next(G.size() + 1, Poly(f, 0));
            for (size_t k = 0; k < G.size(); ++k) {
                for (int j = 0; j < f; ++j) next[k + 1][j] += G[k][j];
                Poly prod = mulmod(G[k], root, mod, M);
                for (int j = 0; j < f; ++j) next[k][j] -= prod[j];
            }
            for (auto& c : next)
                for (auto& x : c) reduce_mod(x, M);
            G = std::move(next);
            Poly base = root, acc(f, 0);
            acc[0] = 1;
            for (long e = p; e > 0; e >>= 1) {
                if (e & 1) acc = mulmod(acc, base, mod, M);
                base = mulmod(base, base, mod, M);
            }
            root = acc;
        }
        defpoly_.resize(f + 1);
        for (int k = 0; k <= f; ++k) {
            for (int j = 1; j < f; ++j)
                if (G[k][j] != 0) throw Error("internal", "defining polynomial not over Z_p");
            defpoly_[k] = G[k][0];
        }
    }
    resid_.resize(f + 1);
    for (int k = 0; k <= f; ++k) {
        mpz_class r = defpoly_[k];
        reduce_mod(r, pows_[1]);
        resid_[k] = r.get_si();
    }
    frob_.resize(f);
    Poly gp(f, 0);
    if (f == 1) {
        frob_[0] = {1};
    } else {
        Poly g(f, 0);
        g[1] = 1;
        gp = pow(g, mpz_class(p), N);
        frob_[0] = one();
        for (int i = 1; i < f; ++i) frob_[i] = mul(frob_[i - 1], gp, N);
    }
}

ContextPtr PadicContext::get(long p, int f, int N) {
    static std::mutex mu;
    static std::map<std::tuple<long, int, int>, ContextPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p, f, N);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ctx = std::make_shared<const PadicContext>(p, f, N);
    cache.emplace(key, ctx);
    return ctx;
}

const mpz_class& PadicContext::ppow(int k) const {
    if (k < 0 || k >= static_cast<int>(pows_.size())) throw Error("precision-out-of-range", std::to_string(k));
    return pows_[k];
}

Poly PadicContext::one() const {
    Poly r(f_, 0);
    r[0] = 1;
    return r;
}

Poly PadicContext::reduce(const Poly& a, int k) const {
    Poly r = a;
    r.resize(f_, 0);
    for (auto& x : r) reduce_mod(x, ppow(k));
    return r;
}

Poly PadicContext::add(const Poly& a, const Poly& b, int k) const {
    Poly r(f_);
    for (int i = 0; i < f_; ++i) {
        r[i] = a[i] + b[i];
        reduce_mod(r[i], ppow(k));
    }
    return r;
}

Poly PadicContext::mul(const Poly& a, const Poly& b, int k) const {
    if (f_ == 1) {
        mpz_class r = a[0] * b[0];
        reduce_mod(r, ppow(k));
        return {r};
    }
    return mulmod(a, b, defpoly_, ppow(k));
}

Poly PadicContext::pow(const Poly& a, const mpz_class& e, int k) const {
    if (e < 0) return pow(inverse_unit(a, k), -e, k);
    Poly acc = one();
    for (size_t b = mpz_sizeinbase(e.get_mpz_t(), 2); b-- > 0;) {
        acc = mul(acc, acc, k);
        if (mpz_tstbit(e.get_mpz_t(), b)) acc = mul(acc, a, k);
    }
    return reduce(acc, k);
}

bool PadicContext::is_unit(const Poly& a) const {
    for (const auto& x : a)
        if (mpz_divisible_p(x.get_mpz_t(), pows_[1].get_mpz_t()) == 0) return true;
    return false;
}

Poly PadicContext::inverse_unit(const Poly& a, int k) const {
    if (!is_unit(a)) throw Error("not-invertible", "element is not a unit");
    if (f_ == 1) {
        mpz_class r;
        mpz_invert(r.get_mpz_t(), a[0].get_mpz_t(), ppow(k).get_mpz_t());
        return {r};
    }
    // Inverse in F_q as a^{q-2}, then Newton lifting b <- b (2 - a b).
    Poly b = pow(reduce(a, 1), nt::ipow(p_, f_) - 2, 1);
    int have = 1;
    while (have < k) {
        have = std::min(2 * have, k);
        Poly ab = mul(a, b, have);
        for (auto& x : ab) x = -x;
        ab[0] += 2;
        b = mul(b, ab, have);
    }
    return b;
}

Poly PadicContext::frobenius(const Poly& a, int k) const {
    Poly r(f_, 0);
    for (int i = 0; i < f_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < f_; ++j) r[j] += a[i] * frob_[i][j];
    }
    for (auto& x : r) reduce_mod(x, ppow(k));
    return r;
}

Poly PadicContext::teichmuller(const Poly& a, int k) const {
    if (!is_unit(a)) throw Error("teichmuller-of-nonunit", "argument has positive valuation");
    // omega(a) = lim a^{q^n}; k - 1 iterations give precision k.
    const mpz_class q = nt::ipow(p_, f_);
    Poly t = reduce(a, k);
    for (int i = 1; i < k; ++i) t = pow(t, q, k);
    if (k == 1) t = pow(t, q, k);
    return t;
}

// ---------------------------------------------------------------------------

PadicScalar PadicScalar::normalize(const ContextPtr& ctx, Poly c, int shift, int prec) {
    if (prec > ctx->precision()) prec = ctx->precision();
    const int rel = prec - shift;
    if (rel <= 0) return zero(ctx, prec);
    c.resize(ctx->degree(), 0);
    int t = nt::kInfiniteValuation;
    for (auto& x : c) {
        reduce_mod(x, ctx->ppow(rel));
        if (x != 0) t = std::min(t, nt::valuation(x, ctx->prime()));
    }
    if (t >= rel) return zero(ctx, prec);
    PadicScalar r;
    r.ctx_ = ctx;
    r.zero_ = false;
    r.val_ = shift + t;
    r.prec_ = prec;
    for (auto& x : c) {
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), ctx->ppow(t).get_mpz_t());
        reduce_mod(x, ctx->ppow(rel - t));
    }
    r.unit_ = std::move(c);
    return r;
}

PadicScalar PadicScalar::zero(const ContextPtr& ctx, int prec) {
    PadicScalar r;
    r.ctx_ = ctx;
    r.zero_ = true;
    r.prec_ = (prec < 0 || prec > ctx->precision()) ? ctx->precision() : prec;
    r.val_ = 0;
    return r;
}

PadicScalar PadicScalar::one(const ContextPtr& ctx) { return from_long(ctx, 1); }

PadicScalar PadicScalar::from_integer(const ContextPtr& ctx, const mpz_class& n, int prec) {
    Poly c(ctx->degree(), 0);
    c[0] = n;
    return normalize(ctx, std::move(c), 0, prec < 0 ? ctx->precision() : prec);
}

PadicScalar PadicScalar::from_long(const ContextPtr& ctx, long n, int prec) {
    return from_integer(ctx, mpz_class(n), prec);
}

PadicScalar PadicScalar::from_rational(const ContextPtr& ctx, const mpq_class& q, int prec) {
    if (prec < 0) prec = ctx->precision();
    if (q == 0) return zero(ctx, prec);
    const long p = ctx->prime();
    int vd = nt::valuation(mpz_class(q.get_den()), p);
    int vn = nt::valuation(mpz_class(q.get_num()), p);
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), ctx->ppow(vn).get_mpz_t());
    mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), ctx->ppow(vd).get_mpz_t());
    const int v = vn - vd;
    if (v >= std::min(prec, ctx->precision())) return zero(ctx, prec);
    const int rel = std::min(prec, ctx->precision()) - v;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), ctx->ppow(rel).get_mpz_t());
    Poly c(ctx->degree(), 0);
    c[0] = num * inv;
    return normalize(ctx, std::move(c), v, prec);
}

PadicScalar PadicScalar::from_vector(const ContextPtr& ctx, const Poly& c, int prec, int shift) {
    return normalize(ctx, c, shift, prec < 0 ? ctx->precision() + shift : prec);
}

PadicScalar PadicScalar::generator(const ContextPtr& ctx) {
    Poly c(ctx->degree(), 0);
    if (ctx->degree() == 1)
        c[0] = 0;
    else
        c[1] = 1;
    return normalize(ctx, c, 0, ctx->precision());
}

long PadicScalar::prime() const {
    if (!ctx_) throw Error("no-context", "uninitialized scalar");
    return ctx_->prime();
}

int PadicScalar::degree() const {
    if (!ctx_) throw Error("no-context", "uninitialized scalar");
    return ctx_->degree();
}

int PadicScalar::valuation() const { return zero_ ? nt::kInfiniteValuation : val_; }

void PadicScalar::check_same(const PadicScalar& o) const {
    if (!ctx_ || !o.ctx_) throw Error("no-context", "uninitialized scalar");
    if (ctx_ != o.ctx_) throw Error("context-mismatch", "operands live in different contexts");
}

Poly PadicScalar::to_vector() const {
    if (!ctx_) throw Error("no-context", "uninitialized scalar");
    Poly c(ctx_->degree(), 0);
    if (zero_) return c;
    if (val_ < 0) throw Error("not-integral", "negative valuation");
    for (int i = 0; i < ctx_->degree(); ++i) {
        c[i] = unit_[i] * ctx_->ppow(val_);
        if (prec_ > 0) reduce_mod(c[i], ctx_->ppow(prec_));
    }
    return c;
}

mpz_class PadicScalar::to_integer() const {
    if (!in_base_field()) throw Error("not-in-base-field", "element has non-constant coefficients");
    return to_vector()[0];
}

bool PadicScalar::in_base_field() const {
    if (zero_) return true;
    for (int i = 1; i < ctx_->degree(); ++i)
        if (unit_[i] != 0) return false;
    return true;
}

PadicScalar PadicScalar::operator-() const {
    if (zero_) return *this;
    Poly c = unit_;
    for (auto& x : c) x = -x;
    return normalize(ctx_, std::move(c), val_, prec_);
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
    check_same(o);
    const int prec = std::min(prec_, o.prec_);
    if (zero_) return o.with_precision(prec);
    if (o.zero_) return with_precision(prec);
    const int v0 = std::min(val_, o.val_);
    if (prec <= v0) return zero(ctx_, prec);
    const int rel = prec - v0;
    Poly c(ctx_->degree());
    for (int i = 0; i < ctx_->degree(); ++i) {
        c[i] = unit_[i] * ctx_->ppow(std::min(val_ - v0, rel)) + o.unit_[i] * ctx_->ppow(std::min(o.val_ - v0, rel));
    }
    return normalize(ctx_, std::move(c), v0, prec);
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const { return *this + (-o); }

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
    check_same(o);
    if (zero_ || o.zero_) {
        const int va = zero_ ? prec_ : val_;
        const int vb = o.zero_ ? o.prec_ : o.val_;
        return zero(ctx_, std::min(prec_ + vb, o.prec_ + va));
    }
    const int v = val_ + o.val_;
    const int rel = std::min(relative_precision(), o.relative_precision());
    const int prec = std::min(v + rel, ctx_->precision());
    if (prec <= v) return zero(ctx_, prec);
    return normalize(ctx_, ctx_->mul(unit_, o.unit_, prec - v), v, prec);
}

PadicScalar PadicScalar::inverse() const {
    if (!ctx_) throw Error("no-context", "uninitialized scalar");
    if (zero_) throw Error("division-by-zero", "inverse of zero");
    const int rel = relative_precision();
    const int v = -val_;
    return normalize(ctx_, ctx_->inverse_unit(unit_, rel), v, v + rel);
}

PadicScalar PadicScalar::operator/(const PadicScalar& o) const {
    check_same(o);
    if (o.zero_) throw Error("division-by-zero", "divisor is zero to its precision");
    if (zero_) return zero(ctx_, prec_ - o.val_);
    return *this * o.inverse();
}

PadicScalar PadicScalar::pow(long e) const {
    if (!ctx_) throw Error("no-context", "uninitialized scalar");
    if (e < 0) return inverse().pow(-e);
    PadicScalar acc = one(ctx_);
    PadicScalar base = *this;
    while (e > 0) {
        if (e & 1) acc *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return acc;
}

PadicScalar PadicScalar::mul_pow_p(int k) const {
    if (zero_) return zero(ctx_, prec_ + k);
    return normalize(ctx_, unit_, val_ + k, prec_ + k);
}

PadicScalar PadicScalar::with_precision(int prec) const {
    if (prec >= prec_) return *this;
    if (zero_) return zero(ctx_, prec);
    return normalize(ctx_, unit_, val_, prec);
}

PadicScalar PadicScalar::to_context(const ContextPtr& other) const {
    if (!ctx_) throw Error("no-context", "uninitialized scalar");
    if (other->prime() != ctx_->prime() || other->degree() != ctx_->degree())
        throw Error("context-mismatch", "different prime or degree");
    if (zero_) return zero(other, std::min(prec_, other->precision()));
    return normalize(other, unit_, val_, prec_);
}

bool rational_reconstruct(const PadicScalar& x, mpq_class& out) {
    if (x.is_null()) throw Error("no-context", "uninitialized scalar");
    if (x.is_zero()) {
        out = 0;
        return true;
    }
    if (x.degree() > 1 && !x.in_base_field()) return false;
    const long p = x.prime();
    const int v = x.valuation();
    const mpz_class m = nt::ipow(p, x.relative_precision());
    mpz_class bound;
    mpz_class half = m / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    // Extended Euclid on (m, u) stopped at the first remainder below the bound.
    mpz_class r0 = m, r1 = x.unit()[0] % m, t0 = 0, t1 = 1;
    if (r1 < 0) r1 += m;
    while (r1 > bound) {
        const mpz_class q = r0 / r1;
        mpz_class tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (t1 == 0 || abs(t1) > bound || gcd(t1, mpz_class(p)) != 1) return false;
    out = mpq_class(r1, t1);
    out.canonicalize();
    const mpz_class pv = nt::ipow(p, v < 0 ? -v : v);
    if (v >= 0)
        out *= pv;
    else
        out /= pv;
    return true;
}

std::string render_digits(const mpz_class& n, long p, int k) {
    mpz_class x = n;
    const mpz_class P(p);
    std::ostringstream os;
    for (int i = 0; i < k; ++i) {
        mpz_class d;
        mpz_fdiv_qr(x.get_mpz_t(), d.get_mpz_t(), x.get_mpz_t(), P.get_mpz_t());
        if (i) os << '.';
        os << d.get_str();
    }
    return os.str();
}

std::string PadicScalar::render() const {
    if (!ctx_) return "null";
    const long p = ctx_->prime();
    std::ostringstream os;
    if (zero_) {
        os << "0 + O(" << p << "^" << prec_ << ")";
        return os.str();
    }
    os << p << "^" << val_ << " * (";
    const int rel = relative_precision();
    for (int i = 0; i < ctx_->degree(); ++i) {
        if (i) os << " + ";
        os << render_digits(unit_[i], p, rel);
        if (i == 1) os << "*g";
        if (i > 1) os << "*g^" << i;
    }
    os << ") + O(" << p << "^" << prec_ << ")";
    return os.str();
}

int residual_valuation(const PadicScalar& a, const PadicScalar& b) {
    PadicScalar d = a - b;
    return d.is_zero() ? d.precision() : d.valuation();
}

PadicScalar teichmuller(const PadicScalar& a) {
    if (a.is_null() || a.is_zero() || a.valuation() != 0)
        throw Error("teichmuller-of-nonunit", "argument must have valuation zero");
    const auto& ctx = a.context();
    return PadicScalar::from_vector(ctx, ctx->teichmuller(a.unit(), ctx->precision()), ctx->precision());
}

PadicScalar teichmuller(const ContextPtr& ctx, const mpz_class& a) {
    return teichmuller(PadicScalar::from_integer(ctx, a));
}

PadicScalar log_iwasawa(const PadicScalar& x) {
    if (x.is_null()) throw Error("no-context", "uninitialized scalar");
    if (x.is_zero()) throw Error("log-of-zero", "logarithm of zero is undefined");
    const auto& ctx = x.context();
    const long p = ctx->prime();
    const int rel = x.relative_precision();
    // log(p) = 0 and log(omega) = 0, so log x = log(u^{q-1}) / (q-1).
    const mpz_class q = nt::ipow(p, ctx->degree());
    int guard = 2;
    for (long n = 1; n <= 4L * rel + 64; n *= p) ++guard;
    const int W = rel + guard;
    if (W > 4 * ctx->precision() + 64) throw Error("precision-out-of-range", "log working precision");
    Poly y = ctx->pow(ctx->reduce(x.unit(), W), q - 1, W);
    y[0] -= 1;
    y = ctx->reduce(y, W);
    int vy = nt::kInfiniteValuation;
    for (const auto& c : y)
        if (c != 0) vy = std::min(vy, nt::valuation(c, p));
    if (vy >= rel) return PadicScalar::zero(ctx, rel);
    const int needW = W;
    Poly sum(ctx->degree(), 0);
    Poly power = ctx->one();
    for (long n = 1;; ++n) {
        int lg = 0;
        for (long m = n; m >= p; m /= p) ++lg;
        if (n * vy - lg >= rel) break;
        power = ctx->mul(power, y, needW);
        const int t = nt::valuation(n, p);
        long np = n;
        for (int i = 0; i < t; ++i) np /= p;
        mpz_class inv;
        mpz_class npz(np);
        mpz_invert(inv.get_mpz_t(), npz.get_mpz_t(), ctx->ppow(needW).get_mpz_t());
        for (int i = 0; i < ctx->degree(); ++i) {
            mpz_class term = power[i];
            mpz_divexact(term.get_mpz_t(), term.get_mpz_t(), ctx->ppow(t).get_mpz_t());
            term *= inv;
            if (n % 2 == 0) term = -term;
            sum[i] += term;
        }
        for (auto& c : sum) reduce_mod(c, ctx->ppow(needW));
    }
    mpz_class inv;
    mpz_class qm1 = q - 1;
    mpz_invert(inv.get_mpz_t(), qm1.get_mpz_t(), ctx->ppow(rel).get_mpz_t());
    for (auto& c : sum) c *= inv;
    return PadicScalar::from_vector(ctx, sum, rel);
}

PadicScalar exp_p(const PadicScalar& x) {
    if (x.is_null()) throw Error("no-context", "uninitialized scalar");
    const auto& ctx = x.context();
    const long p = ctx->prime();
    if (x.is_zero()) {
        if (x.precision() < 1) throw Error("exp-out-of-domain", "argument not known to be in the disc");
        return PadicScalar::one(ctx).with_precision(x.precision());
    }
    const int vx = x.valuation();
    // Convergence requires v(x) > 1/(p-1).
    if (vx * (p - 1) <= 1) throw Error("exp-out-of-domain", "valuation too small");
    const int target = x.precision();
    const double slope = vx - 1.0 / static_cast<double>(p - 1);
    long nmax = 1;
    while (nmax * slope + 1.0 / static_cast<double>(p - 1) < target + 1) ++nmax;
    int vfact = 0;
    for (long n = 2; n <= nmax; ++n) vfact += nt::valuation(n, p);
    const int W = target + vfact + 1;
    Poly X = ctx->reduce(x.to_vector(), W);
    Poly term = ctx->one();
    Poly sum = ctx->one();
    for (long n = 1; n <= nmax; ++n) {
        term = ctx->mul(term, X, W);
        const int t = nt::valuation(n, p);
        long np = n;
        for (int i = 0; i < t; ++i) np /= p;
        mpz_class inv;
        mpz_class npz(np);
        mpz_invert(inv.get_mpz_t(), npz.get_mpz_t(), ctx->ppow(W).get_mpz_t());
        for (auto& c : term) {
            mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), ctx->ppow(t).get_mpz_t());
            c *= inv;
            reduce_mod(c, ctx->ppow(W));
        }
        for (int i = 0; i < ctx->degree(); ++i) sum[i] += term[i];
    }
    return PadicScalar::from_vector(ctx, sum, target);
}

PadicScalar frobenius(const PadicScalar& x, int times) {
    if (x.is_null()) throw Error("no-context", "uninitialized scalar");
    if (x.is_zero()) return x;
    const auto& ctx = x.context();
    const int f = ctx->degree();
    times = ((times % f) + f) % f;
    Poly u = x.unit();
    for (int i = 0; i < times; ++i) u = ctx->frobenius(u, x.relative_precision());
    return PadicScalar::from_vector(ctx, u, x.precision(), x.valuation());
}

}  // namespace padiclz
