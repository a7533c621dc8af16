#include "padiclz/coleman.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "padiclz/characters.hpp"
#include "padiclz/error.hpp"
#include "padiclz/numtheory.hpp"

namespace padiclz {

namespace {

// Per-(p, n, N) tables: degree, modulus, the Eisenstein polynomial
// E(X) = Phi_{p^n}(1+X) and binomials for the basis change.
struct LevelData {
    long p;
    int n;
    int N;
    int d;
    long pn;       // p^n
    long pn1;      // p^{n-1}
    mpz_class P;   // p^N
    std::vector<mpz_class> E;  // e_0..e_d, monic
    std::vector<std::vector<mpz_class>> binom;  // binom(j, i) mod P, i, j < d
};

const LevelData& level_data(long p, int n, int N) {
    static std::mutex mu;
    static std::map<std::tuple<long, int, int>, std::unique_ptr<LevelData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p, n, N);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto L = std::make_unique<LevelData>();
    L->p = p;
    L->n = n;
    L->N = N;
    L->P = nt::ipow(p, N);
    L->pn = nt::ipow(p, n).get_si();
    L->pn1 = n == 0 ? 1 : nt::ipow(p, n - 1).get_si();
    L->d = n == 0 ? 1 : static_cast<int>(L->pn1 * (p - 1));
    const int d = L->d;
    L->binom.assign(d, std::vector<mpz_class>(d, 0));
    for (int j = 0; j < d; ++j) {
        L->binom[j][0] = 1;
        for (int i = 1; i <= j; ++i) L->binom[j][i] = (L->binom[j - 1][i - 1] + (i <= j - 1 ? L->binom[j - 1][i] : mpz_class(0))) % L->P;
    }
    L->E.assign(d + 1, 0);
    if (n == 0) {
        L->E = {0, 1};  // X: level 0 is Z_p with pi_0 = 0
    } else {
        for (long k = 0; k < p; ++k) {
            const long m = k * L->pn1;
            for (long i = 0; i <= m && i <= d; ++i) L->E[i] += nt::binomial(m, i);
        }
        for (auto& e : L->E) e %= L->P;
    }
    const LevelData& ref = *L;
    cache.emplace(key, std::move(L));
    return ref;
}

mpz_class reduce(const mpz_class& x, const mpz_class& P) {
    mpz_class r = x % P;
    if (r < 0) r += P;
    return r;
}

// zeta-basis polynomial of any length reduced modulo Phi_{p^n} and P.
std::vector<mpz_class> reduce_cyclotomic(std::vector<mpz_class> a, const LevelData& L) {
    if (L.n == 0) {
        mpz_class s = 0;
        for (auto& x : a) s += x;
        return {reduce(s, L.P)};
    }
    for (long e = static_cast<long>(a.size()) - 1; e >= L.d; --e) {
        if (a[e] == 0) continue;
        const mpz_class c = a[e];
        a[e] = 0;
        for (long k = 0; k + 1 < L.p; ++k) a[e - L.d + k * L.pn1] -= c;
    }
    a.resize(L.d);
    for (auto& x : a) x = reduce(x, L.P);
    return a;
}

}  // namespace

TowerElement::TowerElement(long p, int level, int precision) : p_(p), n_(level), N_(precision) {
    if (!nt::is_prime(p) || p == 2) throw Error("invalid-prime", "need an odd prime");
    if (level < 0) throw Error("invalid-level", "level must be non-negative");
    c_.assign(level_data(p, level, precision).d, 0);
}

const mpz_class& TowerElement::modulus() const { return level_data(p_, n_, N_).P; }

void TowerElement::check_same(const TowerElement& o) const {
    if (p_ != o.p_ || n_ != o.n_ || N_ != o.N_)
        throw Error("context-mismatch", "tower elements at different levels or precisions");
}

TowerElement TowerElement::integer(long p, int level, int precision, const mpz_class& c) {
    TowerElement x(p, level, precision);
    x.c_[0] = reduce(c, x.modulus());
    return x;
}

TowerElement TowerElement::zeta_power(long p, int level, int precision, long k) {
    TowerElement x(p, level, precision);
    const LevelData& L = level_data(p, level, precision);
    std::vector<mpz_class> a(L.pn, 0);
    a[nt::mod(k, L.pn)] = 1;
    x.c_ = reduce_cyclotomic(std::move(a), L);
    return x;
}

TowerElement TowerElement::uniformizer(long p, int level, int precision) {
    return zeta_power(p, level, precision, 1) - integer(p, level, precision, 1);
}

TowerElement TowerElement::from_pi_basis(long p, int level, int precision, const std::vector<mpz_class>& b) {
    TowerElement x(p, level, precision);
    const LevelData& L = level_data(p, level, precision);
    if (static_cast<int>(b.size()) > L.d) throw Error("invalid-argument", "too many pi-basis coefficients");
    // (zeta - 1)^i = sum_j binom(i, j) (-1)^{i-j} zeta^j
    for (int i = 0; i < static_cast<int>(b.size()); ++i) {
        if (b[i] == 0) continue;
        for (int j = 0; j <= i; ++j) {
            const mpz_class t = b[i] * L.binom[i][j];
            if ((i - j) % 2) x.c_[j] -= t;
            else x.c_[j] += t;
        }
    }
    for (auto& c : x.c_) c = reduce(c, L.P);
    return x;
}

std::vector<mpz_class> TowerElement::pi_coefficients() const {
    const LevelData& L = level_data(p_, n_, N_);
    std::vector<mpz_class> b(L.d, 0);
    for (int j = 0; j < L.d; ++j) {
        if (c_[j] == 0) continue;
        for (int i = 0; i <= j; ++i) b[i] += c_[j] * L.binom[j][i];
    }
    for (auto& x : b) x = reduce(x, L.P);
    return b;
}

std::vector<PadicScalar> TowerElement::coefficients() const {
    const ContextPtr ctx = PadicContext::get(p_, 1, N_);
    std::vector<PadicScalar> out;
    for (const auto& b : pi_coefficients()) out.push_back(PadicScalar::from_integer(ctx, b));
    return out;
}

int TowerElement::valuation() const {
    const auto b = pi_coefficients();
    const int d = degree();
    int v = N_ * d;
    for (int i = 0; i < d; ++i)
        if (b[i] != 0) v = std::min(v, d * nt::valuation(b[i], p_) + i);
    return v;
}

bool TowerElement::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

TowerElement TowerElement::operator+(const TowerElement& o) const {
    check_same(o);
    TowerElement r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = reduce(c_[i] + o.c_[i], modulus());
    return r;
}

TowerElement TowerElement::operator-(const TowerElement& o) const {
    check_same(o);
    TowerElement r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = reduce(c_[i] - o.c_[i], modulus());
    return r;
}

TowerElement TowerElement::operator*(const TowerElement& o) const {
    check_same(o);
    const LevelData& L = level_data(p_, n_, N_);
    std::vector<mpz_class> a(2 * L.d - 1, 0);
    for (int i = 0; i < L.d; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < L.d; ++j) mpz_addmul(a[i + j].get_mpz_t(), c_[i].get_mpz_t(), o.c_[j].get_mpz_t());
    }
    TowerElement r = *this;
    r.c_ = reduce_cyclotomic(std::move(a), L);
    return r;
}

TowerElement TowerElement::operator*(const mpz_class& k) const {
    TowerElement r = *this;
    for (auto& c : r.c_) c = reduce(c * k, modulus());
    return r;
}

TowerElement TowerElement::galois(const mpz_class& a) const {
    const LevelData& L = level_data(p_, n_, N_);
    if (n_ == 0) return *this;
    const long am = mpz_class(((a % L.pn) + L.pn) % L.pn).get_si();
    if (am % p_ == 0) throw Error("not-a-unit", "Galois parameter must be prime to p");
    std::vector<mpz_class> t(L.pn, 0);
    for (int j = 0; j < L.d; ++j)
        if (c_[j] != 0) t[(am * j) % L.pn] += c_[j];
    TowerElement r = *this;
    r.c_ = reduce_cyclotomic(std::move(t), L);
    return r;
}

TowerElement TowerElement::norm_down() const {
    if (n_ == 0) throw Error("invalid-level", "no level below 0");
    const LevelData& L = level_data(p_, n_, N_);
    TowerElement prod = integer(p_, n_, N_, 1);
    if (n_ == 1) {
        for (long a = 1; a < p_; ++a) prod = prod * galois(a);
        for (int j = 1; j < L.d; ++j)
            if (prod.c_[j] != 0) throw Error("internal", "norm to Z_p is not rational");
        return integer(p_, 0, N_, prod.c_[0]);
    }
    for (long k = 0; k < p_; ++k) prod = prod * galois(1 + k * L.pn1);
    TowerElement r(p_, n_ - 1, N_);
    for (int j = 0; j < L.d; ++j) {
        if (j % p_ == 0) r.c_[j / p_] = prod.c_[j];
        else if (prod.c_[j] != 0) throw Error("internal", "norm does not lie in the subfield");
    }
    return r;
}

TowerElement TowerElement::norm_to(int level) const {
    if (level > n_) throw Error("invalid-level", "norm to a higher level");
    TowerElement x = *this;
    while (x.n_ > level) x = x.norm_down();
    return x;
}

TowerElement TowerElement::inverse() const {
    mpz_class r = 0;
    for (const auto& c : c_) r += c;
    r = reduce(r, p_);
    if (r == 0) throw Error("not-a-unit", "inverse of a non-unit");
    mpz_class r0;
    const mpz_class pz = p_;
    mpz_invert(r0.get_mpz_t(), r.get_mpz_t(), pz.get_mpz_t());
    TowerElement y = integer(p_, n_, N_, r0);
    const TowerElement two = integer(p_, n_, N_, 2);
    long target = static_cast<long>(N_) * degree();
    for (long acc = 1; acc < 2 * target; acc *= 2) y = y * (two - *this * y);
    return y;
}

TowerElement TowerElement::divide_by_uniformizer() const {
    if (n_ == 0) throw Error("invalid-level", "no uniformizer at level 0");
    const LevelData& L = level_data(p_, n_, N_);
    const auto x = pi_coefficients();
    // x = pi y with pi^d = -sum e_i pi^i.
    if (x[0] % p_ != 0) throw Error("not-divisible", "element is not divisible by the uniformizer");
    const int d = L.d;
    std::vector<mpz_class> y(d, 0);
    y[d - 1] = -(x[0] / p_);  // e_0 = Phi_{p^n}(1) = p
    for (int i = 1; i < d; ++i) y[i - 1] = x[i] + y[d - 1] * L.E[i];
    const int M = N_ - 1;
    const mpz_class Pm = nt::ipow(p_, M);
    for (auto& c : y) c = reduce(c, Pm);
    return from_pi_basis(p_, n_, M, y);
}

TowerElement TowerElement::divide_by_p() const {
    TowerElement r(p_, n_, N_ - 1);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] % p_ != 0) throw Error("not-divisible", "element is not divisible by p");
        r.c_[i] = c_[i] / p_;
    }
    return r;
}

TowerElement TowerElement::with_precision(int N) const {
    if (N > N_) throw Error("precision", "cannot raise precision");
    TowerElement r(p_, n_, N);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = reduce(c_[i], r.modulus());
    return r;
}

TowerElement TowerElement::embed(int level) const {
    if (level < n_) throw Error("invalid-level", "embedding into a lower level");
    if (level == n_) return *this;
    TowerElement r(p_, level, N_);
    const LevelData& L = level_data(p_, level, N_);
    if (n_ == 0) {
        r.c_[0] = c_[0];
        return r;
    }
    const long step = nt::ipow(p_, level - n_).get_si();
    std::vector<mpz_class> a(L.pn, 0);
    for (int j = 0; j < degree(); ++j) a[j * step] = c_[j];
    r.c_ = reduce_cyclotomic(std::move(a), L);
    return r;
}

PadicScalar TowerElement::to_scalar(const ContextPtr& ctx) const {
    for (size_t j = 1; j < c_.size(); ++j)
        if (c_[j] != 0) throw Error("not-rational", "element does not lie in Z_p");
    return PadicScalar::from_integer(ctx->with_precision(std::max(ctx->precision(), N_)), c_[0], N_).to_context(ctx);
}

std::string TowerElement::dump() const {
    std::ostringstream os;
    os << "level " << n_ << " :";
    for (const auto& b : pi_coefficients()) os << " " << b.get_str();
    return os.str();
}

int residual_valuation(const TowerElement& a, const TowerElement& b) {
    const int N = std::min(a.precision(), b.precision());
    const TowerElement x = a.with_precision(N) - b.with_precision(N);
    return x.valuation() / x.degree();
}

// ---------------------------------------------------------------------------

void check_norm_coherence(const std::vector<TowerElement>& t) {
    for (size_t k = 1; k < t.size(); ++k) {
        const TowerElement down = t[k].norm_down();
        const int N = std::min(down.precision(), t[k - 1].precision());
        if (!(down.with_precision(N) - t[k - 1].with_precision(N)).is_zero())
            throw Error("norm-incoherent", "N(beta_" + std::to_string(k + 1) + ") != beta_" + std::to_string(k));
    }
}

std::vector<TowerElement> build_cyclotomic_tower(const TowerParams& s) {
    if (s.levels < 1) throw Error("invalid-level", "need at least one level");
    std::vector<TowerElement> out;
    for (int n = 1; n <= s.levels; ++n) {
        switch (s.kind) {
        case TowerKind::Uniformizer:
            out.push_back(TowerElement::uniformizer(s.p, n, s.precision));
            break;
        case TowerKind::UnitFromRec: {
            // rec(u^{-1}) pi~ / pi~ with pi~_n = (zeta_n - 1) w, computed with the Galois action.
            const TowerElement pit = TowerElement::uniformizer(s.p, n, s.precision + 1) * s.w;
            const TowerElement moved = pit.galois(s.u);
            const TowerElement winv = TowerElement::integer(s.p, n, s.precision + 1, s.w).inverse();
            TowerElement q = (moved * winv).divide_by_uniformizer();
            out.push_back(q.with_precision(s.precision));
            break;
        }
        case TowerKind::CyclotomicUnit: {
            if (s.a % s.p == 0) throw Error("not-a-unit", "a must be prime to p");
            const TowerElement num = TowerElement::zeta_power(s.p, n, s.precision + 1, s.a) -
                                     TowerElement::integer(s.p, n, s.precision + 1, 1);
            out.push_back(num.divide_by_uniformizer().with_precision(s.precision));
            break;
        }
        }
    }
    check_norm_coherence(out);
    return out;
}

std::vector<TowerElement> tower_product(const std::vector<TowerElement>& a, const std::vector<TowerElement>& b) {
    if (a.size() != b.size()) throw Error("invalid-argument", "towers of different lengths");
    std::vector<TowerElement> out;
    for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] * b[i]);
    return out;
}

std::vector<TowerElement> tower_galois(const std::vector<TowerElement>& t, const mpz_class& u) {
    std::vector<TowerElement> out;
    for (const auto& x : t) out.push_back(x.galois(u));
    return out;
}

std::string dump_tower(const std::vector<TowerElement>& t) {
    std::string s;
    for (const auto& x : t) s += x.dump() + "\n";
    return s;
}

// ---------------------------------------------------------------------------

int ColemanSeries::determined_precision(int i) const {
    int k = 0;
    for (long x = i + 1; x >= p; x /= p) ++k;
    return std::max(0, std::min(precision, levels - k));
}

PadicScalar ColemanSeries::coefficient(int i) const {
    if (i < 0 || i >= static_cast<int>(coeffs.size())) return PadicScalar::zero(coeffs.at(0).context(), precision);
    return coeffs[i];
}

TowerElement ColemanSeries::evaluate(int level) const {
    const LevelData& L = level_data(p, level, precision);
    // Horner in the pi-basis; multiplying by pi shifts and folds pi^d = -sum e_i pi^i.
    std::vector<mpz_class> acc(L.d, 0);
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
        if (level == 0) {
            acc[0] = 0;
        } else {
            const mpz_class top = acc[L.d - 1];
            for (int j = L.d - 1; j > 0; --j) acc[j] = acc[j - 1] - top * L.E[j];
            acc[0] = -top * L.E[0];
        }
        acc[0] += coeffs[i].is_zero() ? mpz_class(0) : coeffs[i].to_integer();
        for (auto& x : acc) x = reduce(x, L.P);
    }
    return TowerElement::from_pi_basis(p, level, precision, acc);
}

ColemanSeries solve_coleman(const std::vector<TowerElement>& tower) {
    if (tower.empty()) throw Error("interpolation-rank-deficient", "empty tower");
    for (size_t k = 0; k < tower.size(); ++k)
        if (tower[k].level() != static_cast<int>(k) + 1)
            throw Error("interpolation-rank-deficient", "tower levels must be 1, 2, ...");
    check_norm_coherence(tower);
    const long p = tower[0].prime();
    int N = tower[0].precision();
    for (const auto& t : tower) N = std::min(N, t.precision());
    const int n = static_cast<int>(tower.size());

    ColemanSeries g;
    g.p = p;
    g.levels = n;
    g.nu = tower[0].valuation();
    std::vector<mpz_class> G = tower[0].with_precision(N).pi_coefficients();
    int prec = N;
    for (int k = 2; k <= n; ++k) {
        const LevelData& L = level_data(p, k, prec);
        if (static_cast<int>(G.size()) > L.d) throw Error("internal", "interpolant too long");
        std::vector<mpz_class> gk(G);
        gk.resize(L.d, 0);
        const TowerElement D = tower[k - 1].with_precision(prec) - TowerElement::from_pi_basis(p, k, prec, gk);
        // t = D / H(pi_k), H(pi_k) = pi_1 / pi_k, 1/pi_1 = prod_{a=2}^{p-1} (zeta_1^a - 1) / p.
        TowerElement P1 = TowerElement::integer(p, k, prec, 1);
        for (long a = 2; a < p; ++a)
            P1 = P1 * (TowerElement::zeta_power(p, k, prec, a * L.pn1) - TowerElement::integer(p, k, prec, 1));
        TowerElement t;
        try {
            t = (D * TowerElement::uniformizer(p, k, prec) * P1).divide_by_p();
        } catch (const Error&) {
            throw Error("interpolation-rank-deficient", "level " + std::to_string(k) + " data is not consistent with lower levels");
        }
        --prec;
        const auto tc = t.pi_coefficients();
        const long h = L.pn1;  // H_{k-1}(X) = ((1+X)^{p^{k-1}} - 1)/X has degree p^{k-1} - 1
        std::vector<mpz_class> next(h - 1 + L.d, 0);
        for (size_t i = 0; i < G.size(); ++i) next[i] = G[i];
        for (long j = 0; j < h; ++j) {
            const mpz_class hj = nt::binomial(h, j + 1);
            for (int i = 0; i < L.d; ++i)
                if (tc[i] != 0) next[j + i] += hj * tc[i];
        }
        const mpz_class P = nt::ipow(p, prec);
        for (auto& x : next) x = reduce(x, P);
        G = std::move(next);
    }
    g.precision = prec;
    const ContextPtr ctx = PadicContext::get(p, 1, prec);
    for (const auto& c : G) g.coeffs.push_back(PadicScalar::from_integer(ctx, c));
    for (int k = 1; k <= n; ++k)
        g.level_residuals.push_back(residual_valuation(g.evaluate(k), tower[k - 1].with_precision(prec)));
    return g;
}

std::vector<PadicScalar> poly_multiply(const std::vector<PadicScalar>& a, const std::vector<PadicScalar>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<PadicScalar> r(a.size() + b.size() - 1, PadicScalar::zero(a[0].context()));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero() && a[i].precision() >= a[i].context()->precision()) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

std::vector<PadicScalar> compose_with_multiplication(const std::vector<PadicScalar>& g, long u) {
    if (g.empty()) return {};
    if (u < 0) throw Error("invalid-argument", "u must be a non-negative integer");
    const ContextPtr& ctx = g[0].context();
    std::vector<PadicScalar> S(u + 1, PadicScalar::zero(ctx));
    for (long j = 1; j <= u; ++j) S[j] = PadicScalar::from_integer(ctx, nt::binomial(u, j));
    std::vector<PadicScalar> acc{g.back()};
    for (long i = static_cast<long>(g.size()) - 2; i >= 0; --i) {
        acc = poly_multiply(acc, S);
        acc[0] += g[i];
    }
    return acc;
}

std::vector<PadicScalar> compose_with_multiplication(const std::vector<PadicScalar>& g, long u, long p, int levels) {
    if (g.empty()) return {};
    if (u < 0) throw Error("invalid-argument", "u must be a non-negative integer");
    const long h = nt::ipow(p, levels).get_si();
    const ContextPtr& ctx = g[0].context();
    const std::vector<PadicScalar> G = reduce_mod_levels(g, p, levels);
    std::vector<PadicScalar> S = compose_with_multiplication({PadicScalar::zero(ctx), PadicScalar::one(ctx)}, u % h);
    S = reduce_mod_levels(S, p, levels);
    std::vector<PadicScalar> acc{G.back()};
    for (long i = static_cast<long>(G.size()) - 2; i >= 0; --i) {
        acc = reduce_mod_levels(poly_multiply(acc, S), p, levels);
        acc[0] += G[i];
    }
    return reduce_mod_levels(acc, p, levels);
}

std::vector<PadicScalar> reduce_mod_levels(const std::vector<PadicScalar>& poly, long p, int levels) {
    if (poly.empty()) return {};
    const ContextPtr& ctx = poly[0].context();
    const long h = nt::ipow(p, levels).get_si();
    // H(X) = ((1+X)^{p^n} - 1)/X, monic of degree p^n - 1.
    std::vector<PadicScalar> H(h);
    for (long j = 0; j < h; ++j) H[j] = PadicScalar::from_integer(ctx, nt::binomial(h, j + 1));
    std::vector<PadicScalar> r = poly;
    for (long e = static_cast<long>(r.size()) - 1; e >= h - 1; --e) {
        const PadicScalar c = r[e];
        if (c.is_zero()) continue;
        for (long j = 0; j < h; ++j) r[e - (h - 1) + j] -= c * H[j];
    }
    if (static_cast<long>(r.size()) > h - 1) r.resize(h - 1, PadicScalar::zero(ctx));
    while (static_cast<long>(r.size()) < h - 1) r.push_back(PadicScalar::zero(ctx));
    return r;
}

IwasawaSeries log_tilde(const ColemanSeries& g, int M) {
    if (g.coeffs.empty()) throw Error("invalid-argument", "empty series");
    const ContextPtr ctx = g.coeffs[0].context();
    std::vector<PadicScalar> unit;
    for (int i = 0; i < g.nu; ++i)
        if (!g.coeffs[i].is_zero()) throw Error("invalid-argument", "coefficients below X^nu must vanish");
    for (size_t i = g.nu; i < g.coeffs.size(); ++i) unit.push_back(g.coeffs[i]);
    if (unit.empty() || !unit[0].is_unit()) throw Error("not-a-unit", "g / X^nu must have unit constant term");
    const PadicScalar c0 = unit[0];
    std::vector<PadicScalar> y;
    for (size_t i = 0; i < unit.size(); ++i) y.push_back(i == 0 ? PadicScalar::zero(ctx) : unit[i] / c0);
    const IwasawaSeries Y = IwasawaSeries::from_coefficients(y, M);
    // log(1 + Y) = sum (-1)^{k+1} Y^k / k, Y in X Z_p[[X]].
    IwasawaSeries logg = IwasawaSeries::constant(log_iwasawa(c0), 1, M);
    IwasawaSeries Yk = IwasawaSeries::constant(PadicScalar::one(ctx), 1, M);
    for (int k = 1; k <= M; ++k) {
        Yk = Yk * Y;
        const IwasawaSeries term = Yk.scaled(PadicScalar::one(ctx) / PadicScalar::from_long(ctx, k));
        logg = (k % 2) ? logg + term : logg - term;
    }
    const IwasawaSeries S = binomial_power_minus_one(ctx, mpz_class(g.p), M);
    const IwasawaSeries shifted = logg.substitute({S});
    const PadicScalar inv_p = PadicScalar::one(ctx) / PadicScalar::from_long(ctx, g.p);
    IwasawaSeries out = logg - shifted.scaled(inv_p);
    for (int i = 0; i <= M; ++i) {
        const PadicScalar c = out.coefficient(i);
        if (!c.is_zero() && c.valuation() < 0)
            throw Error("integrality-violation", "coefficient " + std::to_string(i) + " has valuation " + std::to_string(c.valuation()));
    }
    return out;
}

std::vector<PadicScalar> measure_moments(const ColemanSeries& g, int k_max) {
    const IwasawaSeries L = log_tilde(g, std::max(k_max, 1));
    std::vector<PadicScalar> out;
    for (int k = 0; k <= k_max; ++k) out.push_back(L.coefficient(k));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

ConstantCheck finish(std::string name, PadicScalar lhs, PadicScalar rhs, int required) {
    ConstantCheck c;
    c.name = std::move(name);
    c.residual = residual_valuation(lhs, rhs);
    c.lhs = std::move(lhs);
    c.rhs = std::move(rhs);
    c.required = required;
    c.pass = c.residual >= required;
    return c;
}

// Solves A y = b over Q_p by elimination with minimal-valuation pivots; rows
// that vanish to precision are dropped, so consistent overdetermined systems work.
std::vector<PadicScalar> solve_linear(std::vector<std::vector<PadicScalar>> A, std::vector<PadicScalar> b) {
    const size_t rows = A.size(), cols = A.at(0).size();
    std::vector<size_t> pivot_row(cols, rows);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t best = rows;
        for (size_t i = r; i < rows; ++i)
            if (!A[i][c].is_zero() && (best == rows || A[i][c].valuation() < A[best][c].valuation())) best = i;
        if (best == rows) continue;
        std::swap(A[r], A[best]);
        std::swap(b[r], b[best]);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            const PadicScalar f = A[i][c] / A[r][c];
            for (size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        pivot_row[c] = r++;
    }
    for (size_t i = r; i < rows; ++i)
        if (!b[i].is_zero()) throw Error("inconsistent-system", "no solution to precision");
    std::vector<PadicScalar> y(cols);
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_row[c] == rows) throw Error("inconsistent-system", "singular system");
        y[c] = b[pivot_row[c]] / A[pivot_row[c]][c];
    }
    return y;
}

}  // namespace

ConstantCheck col_split_check(long p, const mpz_class& w, const mpz_class& u, int levels, int N) {
    TowerParams tp;
    tp.kind = TowerKind::UnitFromRec;
    tp.p = p;
    tp.levels = levels;
    tp.precision = N + 2;
    tp.u = u;
    tp.w = w;
    const ColemanSeries g = solve_coleman(build_cyclotomic_tower(tp));
    const ContextPtr ctx = PadicContext::get(p, 1, N);
    const PadicScalar lhs = measure_moments(g, 0)[0].to_context(ctx);
    // (ord ^ log)(pi ^ u) = ord(pi) log(u) - ord(u) log(pi) with ord(pi) = 1, ord(u) = 0.
    const PadicScalar logu = log_iwasawa(PadicScalar::from_integer(ctx, u));
    const PadicScalar rhs = PadicScalar::from_rational(ctx, mpq_class(p - 1, p)) * logu;
    return finish("split pi=" + mpz_class(p * w).get_str() + " u=" + u.get_str(), lhs, rhs, N - 2);
}

ConstantCheck col_nonsplit_check(long p, int F, int d, int e, const std::vector<mpz_class>& u, int N) {
    if (F < 2 || F % d != 0 || d < 2) throw Error("invalid-argument", "need chi(v) of order d > 1 dividing F");
    const RootOfUnity z = chosen_root_of_unity(p, d, N + 4);
    if (z.ctx->degree() != 1 && z.ctx->degree() != F) throw Error("unsupported", "chi(v) not realized in W_F");
    const ContextPtr ctx = PadicContext::get(p, F, N + 4);
    auto lift = [&](const PadicScalar& x) {
        if (x.degree() == F) return x;
        return PadicScalar::from_integer(ctx, x.to_integer());
    };
    const PadicScalar chi = lift(z.powers[nt::mod(e, d)]);
    const PadicScalar chi_inv = chi.inverse();
    const PadicScalar uu = PadicScalar::from_vector(ctx, u);
    if (!uu.is_unit()) throw Error("not-a-unit", "u must be a unit of W_F");
    const PadicScalar ell = log_iwasawa(uu);
    // e_chi = (1/F) sum_k chi^{-k} phi^k.
    PadicScalar proj = PadicScalar::zero(ctx);
    PadicScalar w = PadicScalar::one(ctx);
    for (int k = 0; k < F; ++k) {
        proj += w * frobenius(ell, k);
        w *= chi_inv;
    }
    proj /= PadicScalar::from_long(ctx, F);
    // (1 - phi^{-1}) y = proj, with trace(y) = 0 pinning the chi-part.
    std::vector<std::vector<PadicScalar>> A(F + 1, std::vector<PadicScalar>(F));
    std::vector<PadicScalar> b(F + 1);
    const ContextPtr base = PadicContext::get(p, 1, N + 4);
    for (int j = 0; j < F; ++j) {
        Poly ej(F, 0);
        ej[j] = 1;
        const PadicScalar gj = PadicScalar::from_vector(ctx, ej);
        const Poly col = (gj - frobenius(gj, F - 1)).to_vector();
        for (int i = 0; i < F; ++i) A[i][j] = PadicScalar::from_integer(base, col[i]);
        PadicScalar tr = PadicScalar::zero(ctx);
        for (int k = 0; k < F; ++k) tr += frobenius(gj, k);
        A[F][j] = PadicScalar::from_integer(base, tr.to_vector()[0]);
    }
    const Poly pv = proj.is_zero() ? Poly(F, 0) : proj.to_vector();
    for (int i = 0; i < F; ++i) b[i] = PadicScalar::from_integer(base, pv[i], proj.precision());
    b[F] = PadicScalar::zero(base);
    const auto ys = solve_linear(A, b);
    PadicScalar y = PadicScalar::zero(ctx);
    for (int j = 0; j < F; ++j) {
        Poly ej(F, 0);
        ej[j] = 1;
        if (!ys[j].is_zero()) y += PadicScalar::from_integer(ctx, ys[j].to_integer(), ys[j].precision()) * PadicScalar::from_vector(ctx, ej);
    }
    const PadicScalar one = PadicScalar::one(ctx);
    const PadicScalar pp = PadicScalar::from_long(ctx, p);
    const PadicScalar lhs = y - frobenius(y, 1) / pp;
    const PadicScalar rhs = (one - chi / pp) / (one - chi_inv) * proj;
    const ContextPtr out = PadicContext::get(p, F, N);
    std::ostringstream name;
    name << "non-split F=" << F << " chi(v)=zeta_" << d << "^" << e;
    return finish(name.str(), lhs.to_context(out), rhs.to_context(out), N - 4);
}

bool ColConstantReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

ColConstantReport col_constant_checks(long p, int levels, int N) {
    ColConstantReport r;
    r.checks.push_back(col_split_check(p, 1, 1 + p, levels, N));
    r.checks.push_back(col_split_check(p, 2, 2, levels, N));
    r.checks.push_back(col_split_check(p, 1, 1, levels, N));
    r.checks.push_back(col_nonsplit_check(p, 2, 2, 1, {1 + p, p}, N));
    r.checks.push_back(col_nonsplit_check(p, 2, 2, 1, {1, 0}, N));
    return r;
}

}  // namespace padiclz
