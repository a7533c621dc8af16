#include "padiclz/iwasawa.hpp"

#include <numeric>
#include <sstream>

#include "padiclz/error.hpp"
#include "padiclz/numtheory.hpp"

namespace padiclz {

namespace {

int total_degree(const MultiIndex& e) { return std::accumulate(e.begin(), e.end(), 0); }

}  // namespace

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a > b;
}

IwasawaSeries::IwasawaSeries(ContextPtr ctx, int vars, int M) : ctx_(std::move(ctx)), vars_(vars), M_(M) {
    if (vars < 1) throw Error("invalid-series", "at least one variable required");
    if (M < 0) throw Error("invalid-series", "negative truncation degree");
}

IwasawaSeries IwasawaSeries::constant(const PadicScalar& c, int vars, int M) {
    IwasawaSeries r(c.context(), vars, M);
    r.set(MultiIndex(vars, 0), c);
    return r;
}

IwasawaSeries IwasawaSeries::variable(const ContextPtr& ctx, int index, int vars, int M) {
    IwasawaSeries r(ctx, vars, M);
    MultiIndex e(vars, 0);
    e.at(index) = 1;
    r.set(e, PadicScalar::one(ctx));
    return r;
}

IwasawaSeries IwasawaSeries::from_coefficients(const std::vector<PadicScalar>& a, int M) {
    if (a.empty()) throw Error("invalid-series", "no coefficients");
    IwasawaSeries r(a.front().context(), 1, M);
    for (int k = 0; k < static_cast<int>(a.size()) && k <= M; ++k) r.set({k}, a[k]);
    return r;
}

PadicScalar IwasawaSeries::coefficient(const MultiIndex& e) const {
    auto it = terms_.find(e);
    if (it == terms_.end()) return PadicScalar::zero(ctx_);
    return it->second;
}

void IwasawaSeries::set(const MultiIndex& e, const PadicScalar& c) {
    if (static_cast<int>(e.size()) != vars_) throw Error("invalid-series", "multi-index arity");
    if (total_degree(e) > M_) return;
    if (c.context() != ctx_) throw Error("context-mismatch", "coefficient context");
    terms_[e] = c;
}

void IwasawaSeries::check_compatible(const IwasawaSeries& o) const {
    if (ctx_ != o.ctx_) throw Error("context-mismatch", "series contexts differ");
    if (vars_ != o.vars_) throw Error("invalid-series", "variable count differs");
}

IwasawaSeries IwasawaSeries::operator+(const IwasawaSeries& o) const {
    check_compatible(o);
    IwasawaSeries r(ctx_, vars_, std::min(M_, o.M_));
    for (const auto& [e, c] : terms_) r.set(e, c);
    for (const auto& [e, c] : o.terms_) {
        if (total_degree(e) > r.M_) continue;
        auto it = r.terms_.find(e);
        if (it == r.terms_.end())
            r.terms_.emplace(e, c);
        else
            it->second = it->second + c;
    }
    return r;
}

IwasawaSeries IwasawaSeries::operator-() const {
    IwasawaSeries r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

IwasawaSeries IwasawaSeries::operator-(const IwasawaSeries& o) const { return *this + (-o); }

IwasawaSeries IwasawaSeries::operator*(const IwasawaSeries& o) const {
    check_compatible(o);
    IwasawaSeries r(ctx_, vars_, std::min(M_, o.M_));
    for (const auto& [ea, ca] : terms_) {
        const int da = total_degree(ea);
        for (const auto& [eb, cb] : o.terms_) {
            if (da + total_degree(eb) > r.M_) continue;
            MultiIndex e(vars_);
            for (int i = 0; i < vars_; ++i) e[i] = ea[i] + eb[i];
            PadicScalar prod = ca * cb;
            auto it = r.terms_.find(e);
            if (it == r.terms_.end())
                r.terms_.emplace(std::move(e), std::move(prod));
            else
                it->second = it->second + prod;
        }
    }
    return r;
}

IwasawaSeries IwasawaSeries::scaled(const PadicScalar& c) const {
    IwasawaSeries r = *this;
    for (auto& [e, x] : r.terms_) x = x * c;
    return r;
}

IwasawaSeries IwasawaSeries::truncated(int M) const {
    IwasawaSeries r(ctx_, vars_, std::min(M, M_));
    for (const auto& [e, c] : terms_) r.set(e, c);
    return r;
}

IwasawaSeries IwasawaSeries::substitute(const std::vector<IwasawaSeries>& S) const {
    if (static_cast<int>(S.size()) != vars_) throw Error("invalid-series", "substitution arity");
    const int out_vars = S.front().vars();
    int M = M_;
    for (const auto& s : S) {
        if (s.vars() != out_vars) throw Error("invalid-series", "substitution targets differ");
        if (s.context() != ctx_) throw Error("context-mismatch", "substitution context");
        if (s.terms().count(MultiIndex(out_vars, 0)) && !s.coefficient(MultiIndex(out_vars, 0)).is_zero())
            throw Error("invalid-series", "substituted series must have no constant term");
        M = std::min(M, s.truncation());
    }
    // Powers S_i^k for k <= M.
    std::vector<std::vector<IwasawaSeries>> pw(vars_);
    for (int i = 0; i < vars_; ++i) {
        pw[i].push_back(IwasawaSeries::constant(PadicScalar::one(ctx_), out_vars, M));
        for (int k = 1; k <= M; ++k) pw[i].push_back(pw[i].back() * S[i].truncated(M));
    }
    IwasawaSeries r(ctx_, out_vars, M);
    for (const auto& [e, c] : terms_) {
        IwasawaSeries term = IwasawaSeries::constant(c, out_vars, M);
        for (int i = 0; i < vars_; ++i)
            if (e[i]) term = term * pw[i][e[i]];
        r = r + term;
    }
    return r;
}

PadicScalar IwasawaSeries::evaluate(const PadicScalar& t) const {
    if (vars_ != 1) throw Error("invalid-series", "evaluation needs a univariate series");
    if (!t.is_zero() && t.valuation() < 1) throw Error("evaluation-out-of-disc", "need v(t) >= 1");
    PadicScalar acc = PadicScalar::zero(ctx_);
    for (int k = M_; k >= 0; --k) acc = acc * t + coefficient(k);
    // Unknown tail beyond degree M contributes O(t^{M+1}).
    const int tail = t.is_zero() ? ctx_->precision() : t.valuation() * (M_ + 1);
    return acc.with_precision(tail);
}

std::string IwasawaSeries::serialize() const {
    std::ostringstream os;
    for (const auto& [e, c] : terms_) {
        for (int i = 0; i < vars_; ++i) os << (i ? " " : "") << "T" << (i + 1) << "^" << e[i];
        os << " : " << c.render() << "\n";
    }
    return os.str();
}

AugOrder aug_order(const IwasawaSeries& F) {
    LeadingTerm lt = leading_term(F);
    return {lt.order, lt.certified};
}

LeadingTerm leading_term(const IwasawaSeries& F) {
    LeadingTerm lt;
    int found = -1;
    for (const auto& [e, c] : F.terms()) {
        const int d = total_degree(e);
        if (found >= 0 && d > found) break;
        if (!c.is_zero()) {
            found = d;
            if (c.valuation() == 0 || c.valuation() < c.precision() - kCertificationMargin) lt.certified = true;
        }
    }
    if (found < 0) {
        lt.order = F.truncation() + 1;
        lt.certified = false;
        return lt;
    }
    lt.order = found;
    for (const auto& [e, c] : F.terms())
        if (total_degree(e) == found) lt.part.emplace(e, c);
    return lt;
}

IwasawaSeries binomial_power_minus_one(const ContextPtr& ctx, const mpz_class& w, int M) {
    // binom(w, k) is an integer for integral w; compute it exactly.
    IwasawaSeries r(ctx, 1, M);
    mpz_class b = 1;
    for (int k = 1; k <= M; ++k) {
        b = b * (w - (k - 1));
        mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(k));
        r.set({k}, PadicScalar::from_integer(ctx, b));
    }
    return r;
}

IwasawaSeries involute(const IwasawaSeries& F) {
    const int d = F.vars();
    std::vector<IwasawaSeries> S;
    for (int i = 0; i < d; ++i) {
        IwasawaSeries s(F.context(), d, F.truncation());
        for (int k = 1; k <= F.truncation(); ++k) {
            MultiIndex e(d, 0);
            e[i] = k;
            s.set(e, PadicScalar::from_long(F.context(), k % 2 ? -1 : 1));
        }
        S.push_back(std::move(s));
    }
    return F.substitute(S);
}

IwasawaSeries restrict_series(const IwasawaSeries& F, const mpz_class& a, const mpz_class& b) {
    if (F.vars() != 2) throw Error("invalid-series", "restriction expects two variables");
    const long p = F.context()->prime();
    if (mpz_divisible_ui_p(a.get_mpz_t(), p) && mpz_divisible_ui_p(b.get_mpz_t(), p))
        throw Error("not-a-surjection", "both weights are divisible by p");
    return F.substitute({binomial_power_minus_one(F.context(), a, F.truncation()),
                         binomial_power_minus_one(F.context(), b, F.truncation())});
}

PadicScalar finite_difference_derivative(const IwasawaSeries& F, int K) {
    const auto& ctx = F.context();
    const long p = ctx->prime();
    const int N = ctx->precision();
    if (K <= 0) K = N + 3;
    // Evaluate at t = 0..K; extra digits absorb the division by i.
    int guard = 1;
    for (long q = p; q <= K; q *= p) ++guard;
    auto wide = ctx->with_precision(N + guard);
    IwasawaSeries G(wide, 1, F.truncation());
    for (const auto& [e, c] : F.terms()) G.set(e, c.to_context(wide));
    const PadicScalar u = PadicScalar::from_long(wide, 1 + p);
    std::vector<PadicScalar> vals;
    PadicScalar ut = PadicScalar::one(wide);
    for (int t = 0; t <= K; ++t) {
        vals.push_back(G.evaluate(ut - PadicScalar::one(wide)));
        ut = ut * u;
    }
    PadicScalar acc = PadicScalar::zero(wide);
    std::vector<PadicScalar> diff = vals;
    for (int i = 1; i <= K; ++i) {
        for (int t = 0; t + i <= K; ++t) diff[t] = diff[t + 1] - diff[t];
        PadicScalar term = diff[0] / PadicScalar::from_long(wide, i);
        acc = (i % 2) ? acc + term : acc - term;
    }
    return acc.to_context(ctx);
}

PadicScalar chi_cyc_evaluate(const LeadingTerm& lt, const ContextPtr& ctx) {
    if (lt.part.empty()) return PadicScalar::zero(ctx);
    const PadicScalar lg = log_iwasawa(PadicScalar::from_long(ctx, 1 + ctx->prime()));
    PadicScalar c = lt.part.begin()->second;
    if (lt.part.begin()->first.size() != 1) throw Error("invalid-series", "univariate leading term expected");
    return c * lg.pow(lt.order);
}

}  // namespace padiclz
