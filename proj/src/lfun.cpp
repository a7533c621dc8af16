#include "padiclz/lfun.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

#include "padiclz/cyclotomic.hpp"
#include "padiclz/error.hpp"
#include "padiclz/numtheory.hpp"

namespace padiclz {

namespace {

// Product of two characters in the exponent sense, so complex values multiply.
DirichletCharacter complex_product(const DirichletCharacter& a, const DirichletCharacter& b) {
    const long f = nt::lcm(a.modulus(), b.modulus());
    const long n = nt::lcm(a.order(), b.order());
    std::vector<int> t(f, -1);
    for (long x = 0; x < f; ++x) {
        const int ea = a.exponent(x), eb = b.exponent(x);
        if (ea < 0 || eb < 0) continue;
        t[x] = static_cast<int>(nt::mod(ea * (n / a.order()) + eb * (n / b.order()), n));
    }
    return DirichletCharacter(f, static_cast<int>(n), std::move(t));
}

CycRational negated(CycRational c) {
    for (auto& q : c.coeffs) q = -q;
    return c;
}

}  // namespace

ArchLValue arch_value_at_zero(const DirichletCharacter& psi_in) {
    if (psi_in.is_trivial()) throw Error("pole-at-one-not-modeled", "trivial character");
    ArchLValue out;
    out.chi = psi_in.primitive();
    const DirichletCharacter& psi = out.chi;
    if (psi.is_odd()) {
        out.order = 0;
        out.exact = negated(bernoulli_general(psi, 1));
        const auto z = out.exact.complex_value();
        out.value = {z.real(), z.imag()};
        out.error = 1e-14L;
        return out;
    }
    // L'(0, psi) = -1/2 sum_a psi(a) log|1 - zeta_f^a| for even primitive psi.
    out.order = 1;
    const long f = psi.modulus();
    std::complex<long double> acc = 0;
    long double err = 0;
    for (long a = 1; a < f; ++a) {
        if (psi.exponent(a) < 0) continue;
        CycInt one_minus = CycInt::integer(f, 1) - CycInt::zeta_power(f, a);
        const RealWithError lg = complex_log_abs(CycFrac::from(one_minus), 1);
        const auto c = psi.complex_value(a);
        acc += std::complex<long double>(c.real(), c.imag()) * lg.value;
        err += lg.error + 1e-16L * std::fabs(lg.value);
    }
    out.value = -0.5L * acc;
    out.error = 0.5L * err + 1e-15L;
    return out;
}

ArchLeadingTerm arch_leading_term_base_change(const HeckeSetup& s) {
    const DirichletCharacter a = s.chi_q.inverse();
    const DirichletCharacter b = complex_product(a, s.eps_k);
    ArchLValue la = arch_value_at_zero(a);
    ArchLValue lb = arch_value_at_zero(b);
    if (la.order + lb.order != 1) throw Error("unexpected-order", "expected exactly one vanishing factor");
    ArchLeadingTerm out;
    out.order = 1;
    if (la.order == 1) std::swap(la, lb);
    out.value_factor = la;
    out.vanishing_factor = lb;
    out.value = la.value * lb.value;
    out.error = std::abs(la.value) * lb.error + std::abs(lb.value) * la.error + la.error * lb.error;
    return out;
}

// ---------------------------------------------------------------------------
// Kubota-Leopoldt moments.
//
// With rho = chi omega^i and s(x) = log_p<x>/L, L = log_p(1+p), the ball
// A + d p^m Z_p (A a unit mod p^m, chi read mod d) contributes through
// x = A (1 + p^m y / A) and s(x) = s(A) + lambda(y / A), where
// lambda(w) = sum_j (-1)^{j+1} p^{mj} w^j / (j L). Expanding binom(s(A) + lambda, k)
// by Vandermonde and integrating y^r against E_1 restricted to the residue
// classes mod d gives
//   g_k = sum_b sum_r Q_r(b) sum_l q_{l,r} Pi_{k-l,r}(b),
//   Q_r(b) = sum_{t<d} chi(b + p^m t) d^r B_{r+1}(t/d) / (r+1),
//   Pi_{kappa,r}(b) = sum_{A = b mod d} omega^i(A) A^{-r} binom(s(A), kappa),
// with q_{l,r} the coefficient of w^r in binom(lambda(w), l). The coefficients
// q_{l,r} have valuation at least (m-1) r - v(l!), which fixes the Taylor order.

KLEngine::KLEngine(long p, int depth, int M, int N) : p_(p), m_(depth), M_(M), N_(N) {
    if (!nt::is_prime(p) || p < 3) throw Error("invalid-prime", "need an odd prime");
    if (depth < 2) throw Error("invalid-depth", "depth must be at least 2");
    for (int k = 2; k <= M_; ++k) E_ += nt::valuation(static_cast<long>(k), p_);
    auto digits_of = [&](long r) {
        int k = 0;
        for (long x = r; x >= p_; x /= p_) ++k;
        return k;
    };
    R_ = 0;
    while ((m_ - 1) * static_cast<long>(R_ + 1) - digits_of(R_ + 2) < N_ + 2 + E_) ++R_;
    int vr = 0;
    for (int r = 0; r <= R_; ++r) vr = std::max(vr, nt::valuation(static_cast<long>(r + 1), p_));
    E2_ = 1 + vr;
    W_ = N_ + E_ + E2_ + 1;
    P_ = nt::ipow(p_, W_);
    const int Ws = W_ + E_ + 2;
    const mpz_class Ps = nt::ipow(p_, Ws);

    // L = p * Lu with Lu a unit.
    const ContextPtr wide = PadicContext::get(p_, 1, Ws + 4);
    const PadicScalar L = log_iwasawa(PadicScalar::from_long(wide, 1 + p_));
    if (L.valuation() != 1) throw Error("internal", "unexpected valuation of log(1+p)");
    const mpz_class Lu = L.mul_pow_p(-1).to_integer();
    mpz_class Lu_inv;
    mpz_invert(Lu_inv.get_mpz_t(), Lu.get_mpz_t(), Ps.get_mpz_t());

    const long pm = nt::ipow(p_, m_).get_si();
    for (long a = 1; a < pm; ++a) {
        if (a % p_ == 0) continue;
        A_.push_back(a);
        const PadicScalar la = log_iwasawa(PadicScalar::from_long(wide, a));
        mpz_class s = la.is_zero() ? mpz_class(0) : la.mul_pow_p(-1).to_integer();
        s = (s * Lu_inv) % Ps;
        std::vector<mpz_class> row(M_ + 1);
        mpz_class ff = 1;
        mpz_class fact = 1;
        for (int k = 0; k <= M_; ++k) {
            if (k > 0) {
                ff = (ff * (s - (k - 1))) % Ps;
                fact *= k;
            }
            const int v = nt::valuation(fact, p_);
            mpz_class unit = fact / nt::ipow(p_, v), inv;
            mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), Ps.get_mpz_t());
            mpz_class x = ff / nt::ipow(p_, v);  // exact: p^v divides the falling factorial
            row[k] = ((x * inv) % P_ + P_) % P_;
        }
        binom_.push_back(std::move(row));
        mpz_class ainv;
        const mpz_class az = a;
        mpz_invert(ainv.get_mpz_t(), az.get_mpz_t(), P_.get_mpz_t());
        inv_A_.push_back(ainv);
    }

    const ContextPtr tctx = PadicContext::get(p_, 1, W_);
    teich_.assign(p_, 0);
    for (long a = 1; a < p_; ++a) teich_[a] = teichmuller(tctx, a).to_integer();

    // lambda_j mod p^Ws, then falling factorials of lambda truncated at w^R.
    std::vector<mpz_class> lam(R_ + 1, 0);
    for (int j = 1; j <= R_; ++j) {
        const int vj = nt::valuation(static_cast<long>(j), p_);
        const int e = m_ * j - vj - 1;
        if (e >= Ws) continue;
        mpz_class ju = j / static_cast<long>(nt::ipow(p_, vj).get_si()), jinv;
        mpz_invert(jinv.get_mpz_t(), ju.get_mpz_t(), Ps.get_mpz_t());
        mpz_class c = nt::ipow(p_, e) * jinv % Ps * Lu_inv % Ps;
        lam[j] = (j % 2) ? c : (Ps - c) % Ps;
    }
    qhat_.assign(M_ + 1, std::vector<mpz_class>(R_ + 1, 0));
    std::vector<mpz_class> F(R_ + 1, 0);
    F[0] = 1;
    mpz_class fact = 1;
    for (int l = 0; l <= M_; ++l) {
        if (l > 0) {
            std::vector<mpz_class> G(R_ + 1, 0);
            for (int a = 0; a <= R_; ++a) {
                if (F[a] == 0) continue;
                G[a] -= F[a] * (l - 1);
                for (int b = 1; a + b <= R_; ++b) G[a + b] += F[a] * lam[b];
            }
            for (auto& g : G) g = ((g % Ps) + Ps) % Ps;
            F = std::move(G);
            fact *= l;
        }
        const int v = nt::valuation(fact, p_);
        mpz_class unit = fact / nt::ipow(p_, v), inv;
        mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), Ps.get_mpz_t());
        for (int r = 0; r <= R_; ++r) {
            // p^E F[r] / l!, integral because v(F[r]) + E >= v(l!).
            mpz_class x = F[r] * nt::ipow(p_, E_ - v) % Ps * inv;
            qhat_[l][r] = ((x % P_) + P_) % P_;
        }
    }
}

std::shared_ptr<KLEngine> KLEngine::get(long p, int depth, int M, int N) {
    static std::mutex mu;
    static std::map<std::tuple<long, int, int, int>, std::shared_ptr<KLEngine>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p, depth, M, N);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto e = std::make_shared<KLEngine>(p, depth, M, N);
    cache.emplace(key, e);
    return e;
}

mpz_class KLEngine::to_residue(const mpq_class& q, int shift) const {
    if (q == 0) return 0;
    const int vn = nt::valuation(q.get_num(), p_);
    const int vd = nt::valuation(q.get_den(), p_);
    const int e = vn - vd + shift;
    if (e < 0) throw Error("internal", "moment scaling too small");
    mpz_class num = q.get_num() / nt::ipow(p_, vn);
    mpz_class den = q.get_den() / nt::ipow(p_, vd), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), P_.get_mpz_t());
    if (e >= W_) return 0;
    mpz_class x = num * inv % P_ * nt::ipow(p_, e) % P_;
    return (x + P_) % P_;
}

const std::vector<std::vector<std::vector<mpz_class>>>& KLEngine::s_table(long d, long i) {
    auto key = std::make_pair(d, i);
    auto it = S_.find(key);
    if (it != S_.end()) return it->second;
    using Cube = std::vector<std::vector<std::vector<mpz_class>>>;
    Cube pi(d, std::vector<std::vector<mpz_class>>(M_ + 1, std::vector<mpz_class>(R_ + 1, 0)));
    std::vector<mpz_class> x(R_ + 1);
    for (size_t idx = 0; idx < A_.size(); ++idx) {
        const long a = A_[idx];
        mpz_class w = 1;
        for (long t = 0; t < i; ++t) w = w * teich_[a % p_] % P_;
        x[0] = w;
        for (int r = 1; r <= R_; ++r) x[r] = x[r - 1] * inv_A_[idx] % P_;
        auto& bin = pi[a % d];
        for (int k = 0; k <= M_; ++k) {
            const mpz_class& y = binom_[idx][k];
            for (int r = 0; r <= R_; ++r) mpz_addmul(bin[k][r].get_mpz_t(), y.get_mpz_t(), x[r].get_mpz_t());
        }
    }
    Cube S(d, std::vector<std::vector<mpz_class>>(M_ + 1, std::vector<mpz_class>(R_ + 1, 0)));
    for (long b = 0; b < d; ++b) {
        for (auto& row : pi[b])
            for (auto& v : row) v %= P_;
        for (int k = 0; k <= M_; ++k)
            for (int r = 0; r <= R_; ++r) {
                mpz_class acc = 0;
                for (int l = 0; l <= k; ++l) mpz_addmul(acc.get_mpz_t(), qhat_[l][r].get_mpz_t(), pi[b][k - l][r].get_mpz_t());
                S[b][k][r] = acc % P_;
            }
    }
    return S_.emplace(key, std::move(S)).first->second;
}

std::vector<PadicScalar> KLEngine::moments(const DirichletCharacter& chi_in, long i) {
    const DirichletCharacter chi = chi_in.primitive();
    const long d = chi.modulus();
    if (d == 1) throw Error("unsupported-conductor", "tame conductor 1 is not supported");
    if (d % p_ == 0) throw Error("conductor-divisible-by-p", "tame conductor must be prime to p");
    i = nt::mod(i, p_ - 1);
    const int n = chi.order();

    std::lock_guard<std::mutex> lock(mu_);
    const auto& S = s_table(d, i);

    // beta_r(t) = d^r B_{r+1}(t/d) / (r+1), scaled by p^{E2}.
    std::vector<std::vector<mpz_class>> beta(R_ + 1, std::vector<mpz_class>(d));
    mpz_class dr = 1;
    for (int r = 0; r <= R_; ++r) {
        for (long t = 0; t < d; ++t) {
            mpq_class q = nt::bernoulli_poly(r + 1, mpq_class(t, d)) * dr / (r + 1);
            q.canonicalize();
            beta[r][t] = to_residue(q, E2_);
        }
        dr *= d;
    }
    const long pm = nt::ipow(p_, m_).get_si();
    std::vector<std::vector<mpz_class>> X(M_ + 1, std::vector<mpz_class>(n, 0));
    std::vector<mpz_class> Q(n);
    for (long b = 0; b < d; ++b) {
        for (int r = 0; r <= R_; ++r) {
            std::fill(Q.begin(), Q.end(), 0);
            for (long t = 0; t < d; ++t) {
                const int e = chi.exponent(nt::mod(b + (pm % d) * t, d));
                if (e >= 0) Q[e] += beta[r][t];
            }
            for (int e = 0; e < n; ++e) {
                if (Q[e] == 0) continue;
                Q[e] %= P_;
                for (int k = 0; k <= M_; ++k) mpz_addmul(X[k][e].get_mpz_t(), Q[e].get_mpz_t(), S[b][k][r].get_mpz_t());
            }
        }
    }
    const RootOfUnity z = chosen_root_of_unity(p_, n, W_);
    const ContextPtr out_ctx = z.ctx->with_precision(N_);
    std::vector<PadicScalar> g;
    g.reserve(M_ + 1);
    for (int k = 0; k <= M_; ++k) {
        PadicScalar acc = PadicScalar::zero(z.ctx);
        for (int e = 0; e < n; ++e) {
            if (X[k][e] % P_ == 0) continue;
            acc += PadicScalar::from_integer(z.ctx, X[k][e] % P_) * z.powers[e];
        }
        acc = acc.mul_pow_p(-(E_ + E2_));
        g.push_back(acc.with_precision(N_).to_context(out_ctx));
    }
    return g;
}

PadicScalar KLSeries::value_at_one_minus(int n) const {
    const ContextPtr& ctx = series.context();
    const PadicScalar u = PadicScalar::from_long(ctx, 1 + p);
    PadicScalar t = u.pow(1 - n) - PadicScalar::one(ctx);
    return series.evaluate(t);
}

KLSeries kl_series(const DirichletCharacter& chi_in, long j, long p, int depth, int M, int N) {
    const DirichletCharacter chi = chi_in.primitive();
    const bool even = chi.is_even() == (nt::mod(j, 2) == 0);
    if (!even) throw Error("odd-branch", "chi omega^j must be even");
    if (chi.modulus() % p == 0) throw Error("conductor-divisible-by-p", "tame conductor must be prime to p");
    auto engine = KLEngine::get(p, depth, M, N);
    std::vector<PadicScalar> g = engine->moments(chi, j - 1);
    // g(T) integrates rho <x>^{w}, w = log(1+T)/log(1+p); L_p(1-n) is -g at w = n-1.
    IwasawaSeries G = -involute(IwasawaSeries::from_coefficients(g, M));
    KLSeries out;
    out.tame = chi;
    out.j = nt::mod(j, p - 1);
    out.p = p;
    out.depth = depth;
    out.precision = N;
    out.series = std::move(G);
    return out;
}

PadicScalar kl_interpolation_value(const DirichletCharacter& chi, long j, long p, int n, int N) {
    const DirichletCharacter phi = twist_by_teichmuller(chi.primitive(), j - n, p).primitive();
    const CycRational B = bernoulli_general(phi, n);
    PadicScalar b = B.padic_value(p, N);
    const ContextPtr& ctx = b.context();
    PadicScalar euler = PadicScalar::one(ctx);
    if (phi.modulus() % p != 0) {
        PadicScalar v = phi.padic_value(nt::mod(p, phi.modulus()), p, N).to_context(ctx);
        euler -= v * PadicScalar::from_integer(ctx, nt::ipow(p, n - 1));
    }
    return -(euler * b) / PadicScalar::from_long(ctx, n);
}

std::pair<GrossBranch, GrossBranch> gross_branches(const HeckeSetup& s, GrossConvention c) {
    auto branch = [&](const DirichletCharacter& base) {
        GrossBranch b;
        b.tame = base.primitive();
        b.j = 0;
        if (b.tame.is_odd()) {
            if (!c.twist_omega) throw Error("odd-branch", "untwisted branch " + b.tame.spec_string() + " is odd");
            b.j = 1;
        }
        if (c.inverse) {
            b.tame = b.tame.inverse();
            b.j = nt::mod(-b.j, s.p - 1);
        }
        return b;
    };
    return {branch(s.chi_q), branch(padic_product(s.chi_q, s.eps_k, s.p))};
}

IwasawaSeries reflect_s_to_one_minus_s(const IwasawaSeries& F) {
    const ContextPtr& ctx = F.context();
    const int M = F.truncation();
    const long p = ctx->prime();
    // S = u (1+T)^{-1} - 1 = p + u sum_{k>=1} (-T)^k.
    std::vector<PadicScalar> sc(M + 1);
    const PadicScalar u = PadicScalar::from_long(ctx, 1 + p);
    sc[0] = PadicScalar::from_long(ctx, p);
    for (int k = 1; k <= M; ++k) sc[k] = (k % 2) ? -u : u;
    const IwasawaSeries S = IwasawaSeries::from_coefficients(sc, M);
    IwasawaSeries acc = IwasawaSeries::constant(F.coefficient(M), 1, M);
    for (int k = M - 1; k >= 0; --k) acc = acc * S + IwasawaSeries::constant(F.coefficient(k), 1, M);
    // Dropped terms a_k S^k, k > M, only reach T^i with valuation >= v_min + M + 1 - i.
    int vmin = nt::kInfiniteValuation;
    for (const auto& [e, c] : F.terms()) vmin = std::min(vmin, c.is_zero() ? c.precision() : c.valuation());
    if (vmin == nt::kInfiniteValuation) vmin = 0;
    IwasawaSeries out(ctx, 1, M);
    for (int i = 0; i <= M; ++i) out.set({i}, acc.coefficient(i).with_precision(vmin + M + 1 - i));
    return out;
}

KatzCyclotomic katz_cyclotomic(const HeckeSetup& s, int depth, int M, int N, GrossConvention c) {
    auto [b1, b2] = gross_branches(s, c);
    KatzCyclotomic out;
    out.first = kl_series(b1.tame, b1.j, s.p, depth, M, N);
    out.second = kl_series(b2.tame, b2.j, s.p, depth, M, N);
    out.second_reflected = reflect_s_to_one_minus_s(out.second.series);
    out.series = out.first.series * out.second_reflected;
    return out;
}

}  // namespace padiclz
