#include "padiclz/cyclotomic.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "padiclz/error.hpp"
#include "padiclz/numtheory.hpp"

namespace padiclz {

namespace {

const std::vector<mpz_class>& phi_poly(long m) {
    static std::mutex mu;
    static std::map<long, std::vector<mpz_class>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, nt::cyclotomic_polynomial(m)).first;
    return it->second;
}

std::vector<mpz_class> reduce_phi(std::vector<mpz_class> a, long m) {
    const auto& phi = phi_poly(m);
    const size_t d = phi.size() - 1;
    for (size_t i = a.size(); i-- > d;) {
        if (a[i] == 0) continue;
        const mpz_class c = a[i];
        for (size_t j = 0; j <= d; ++j) a[i - d + j] -= c * phi[j];
    }
    a.resize(d, 0);
    return a;
}

}  // namespace

CycInt::CycInt(long m) : m_(m) {
    if (m < 1) throw Error("invalid-level", std::to_string(m));
    c_.assign(phi_poly(m).size() - 1, 0);
}

CycInt::CycInt(long m, std::vector<mpz_class> coeffs) : m_(m) {
    if (m < 1) throw Error("invalid-level", std::to_string(m));
    c_ = reduce_phi(std::move(coeffs), m);
}

CycInt CycInt::integer(long m, const mpz_class& n) {
    CycInt r(m);
    r.c_[0] = n;
    return r;
}

CycInt CycInt::zeta_power(long m, long k) {
    std::vector<mpz_class> c(nt::mod(k, m) + 1, 0);
    c.back() = 1;
    return CycInt(m, std::move(c));
}

bool CycInt::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CycInt::is_rational_integer() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

CycInt CycInt::operator+(const CycInt& o) const {
    if (m_ != o.m_) throw Error("level-mismatch", "add");
    CycInt r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
}

CycInt CycInt::operator-() const {
    CycInt r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

CycInt CycInt::operator-(const CycInt& o) const { return *this + (-o); }

CycInt CycInt::operator*(const CycInt& o) const {
    if (m_ != o.m_) throw Error("level-mismatch", "multiply");
    std::vector<mpz_class> r(c_.size() + o.c_.size(), 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return CycInt(m_, std::move(r));
}

CycInt CycInt::operator*(const mpz_class& k) const {
    CycInt r = *this;
    for (auto& x : r.c_) x *= k;
    return r;
}

CycInt CycInt::pow(long e) const {
    if (e < 0) throw Error("invalid-argument", "negative power of a cyclotomic integer");
    CycInt acc = integer(m_, 1), b = *this;
    while (e > 0) {
        if (e & 1) acc = acc * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return acc;
}

CycInt CycInt::galois(long a) const {
    if (nt::gcd(a, m_) != 1) throw Error("not-coprime", "Galois action needs a unit");
    std::vector<mpz_class> r(m_, 0);
    for (size_t i = 0; i < c_.size(); ++i) r[nt::mod(a * static_cast<long>(i), m_)] += c_[i];
    return CycInt(m_, std::move(r));
}

mpz_class CycInt::norm() const {
    CycInt acc = integer(m_, 1);
    for (long a = 1; a < m_ || (m_ == 1 && a == 1); ++a) {
        if (nt::gcd(a, m_) != 1) continue;
        acc = acc * galois(a);
        if (m_ == 1) break;
    }
    if (!acc.is_rational_integer()) throw Error("internal", "norm is not rational");
    return acc.c_[0];
}

CycInt CycInt::lift(long m2) const {
    if (m2 % m_ != 0) throw Error("level-mismatch", "lift needs a multiple of the level");
    const long s = m2 / m_;
    std::vector<mpz_class> r(s * c_.size() + 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) r[s * i] = c_[i];
    return CycInt(m2, std::move(r));
}

std::complex<long double> CycInt::complex_embedding(long k) const {
    std::complex<long double> z = 0;
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        const long double ang = two_pi * static_cast<long double>(nt::mod(k * static_cast<long>(i), m_)) / m_;
        z += static_cast<long double>(c_[i].get_d()) * std::polar(1.0L, ang);
    }
    return z;
}

PadicScalar CycInt::padic_embedding(long p, int N) const {
    if (m_ % p == 0) throw Error("ramified-embedding", "p divides the level");
    RootOfUnity z = chosen_root_of_unity(p, static_cast<int>(m_), N);
    PadicScalar acc = PadicScalar::zero(z.ctx);
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) acc += PadicScalar::from_integer(z.ctx, c_[i]) * z.powers[i % m_];
    return acc;
}

std::string CycInt::render() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i].get_str();
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------

void CycFrac::normalize() {
    if (den < 0) {
        den = -den;
        num = -num;
    }
    mpz_class g = den;
    for (const auto& c : num.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g > 1) {
        std::vector<mpz_class> c = num.coeffs();
        for (auto& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
        num = CycInt(num.level(), c);
        mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
    }
}

CycFrac CycFrac::operator*(const CycFrac& o) const {
    CycFrac r{num * o.num, den * o.den};
    r.normalize();
    return r;
}

CycFrac CycFrac::inverse() const {
    if (num.is_zero()) throw Error("division-by-zero", "inverse of zero");
    // 1/x = prod_{a != 1} sigma_a(x) / N(x).
    const long m = num.level();
    CycInt co = CycInt::integer(m, 1);
    for (long a = 2; a < m; ++a)
        if (nt::gcd(a, m) == 1) co = co * num.galois(a);
    const mpz_class n = (co * num).coeffs()[0];
    CycFrac r{co * den, n};
    r.normalize();
    return r;
}

CycFrac CycFrac::operator/(const CycFrac& o) const { return *this * o.inverse(); }

CycFrac CycFrac::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    CycFrac r{num.pow(e), 1};
    mpz_pow_ui(r.den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(e));
    r.normalize();
    return r;
}

mpq_class CycFrac::norm() const {
    mpz_class dn;
    mpz_pow_ui(dn.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(num.degree()));
    mpq_class r(num.norm(), dn);
    r.canonicalize();
    return r;
}

std::complex<long double> CycFrac::complex_embedding(long k) const {
    return num.complex_embedding(k) / static_cast<long double>(den.get_d());
}

PadicScalar CycFrac::padic_embedding(long p, int N) const {
    const int loss = nt::valuation(den, p);
    PadicScalar x = num.padic_embedding(p, N + loss);
    x = x / PadicScalar::from_integer(x.context(), den);
    return x.to_context(x.context()->with_precision(N));
}

CycFrac cyclotomic_unit(long a, long m) {
    if (nt::gcd(a, m) != 1) throw Error("not-coprime", "need gcd(a, m) = 1");
    const long r = nt::mod(a, m);
    if (r == 1 % m) throw Error("degenerate-unit", "a = 1 mod m");
    std::vector<mpz_class> c(r, 1);
    return CycFrac::from(CycInt(m, std::move(c)));
}

std::complex<long double> ProjectedUnit::complex_log(long k) const {
    std::complex<long double> acc = 0;
    const long m = base.num.level();
    for (size_t i = 0; i < automorphisms.size(); ++i) {
        const long ainv = nt::invmod(automorphisms[i], m);
        const CycFrac y = base.galois(ainv);
        const long double lg = std::log(std::abs(y.complex_embedding(k)));
        const auto w = weights[i].complex_value();
        acc += std::complex<long double>(w.real(), w.imag()) * lg;
    }
    return acc;
}

PadicScalar ProjectedUnit::padic_log(long p, int N) const {
    const long m = base.num.level();
    PadicScalar acc;
    for (size_t i = 0; i < automorphisms.size(); ++i) {
        const long ainv = nt::invmod(automorphisms[i], m);
        PadicScalar lg = log_iwasawa(base.galois(ainv).padic_embedding(p, N));
        PadicScalar w = weights[i].padic_value(p, N);
        // Both live in unramified extensions; move to a common one when the degrees differ.
        if (w.degree() != lg.degree()) {
            if (w.degree() == 1)
                w = PadicScalar::from_integer(lg.context(), w.to_integer(), w.precision());
            else if (lg.degree() == 1)
                lg = PadicScalar::from_integer(w.context(), lg.to_integer(), lg.precision());
            else
                throw Error("incompatible-realizations", "weights and embedding use different fields");
        }
        PadicScalar term = w * lg;
        acc = acc.is_null() ? term : acc + term;
    }
    return acc;
}

ProjectedUnit e_chi_project(const CycFrac& x, const DirichletCharacter& chi, long p) {
    const long m = x.num.level();
    if (m % chi.modulus() != 0) throw Error("invalid-character", "character modulus must divide the level");
    const long G = nt::euler_phi(m);
    if (p > 0 && G % p == 0) throw Error("idempotent-not-integral", "p divides the group order");
    ProjectedUnit out;
    out.base = x;
    for (long a = 1; a <= m; ++a) {
        if (nt::gcd(a, m) != 1) continue;
        CycRational w;
        w.order = chi.order();
        w.coeffs.assign(chi.order(), 0);
        w.coeffs[chi.exponent(a)] = mpq_class(1, G);
        out.automorphisms.push_back(a % m);
        out.weights.push_back(std::move(w));
    }
    return out;
}

RealWithError complex_log_abs(const CycFrac& x, long k) {
    const auto z = x.complex_embedding(k);
    long double mag = 0;
    for (const auto& c : x.num.coeffs()) mag += std::fabs(static_cast<long double>(c.get_d()));
    const long double a = std::abs(z);
    if (a == 0) throw Error("log-of-zero", "embedding vanishes");
    RealWithError r;
    r.value = std::log(a);
    r.error = 64.0L * std::numeric_limits<long double>::epsilon() * (mag / static_cast<long double>(x.den.get_d()) + 1) / a;
    return r;
}

PadicScalar padic_log_embed(const CycFrac& x, long p, int N) { return log_iwasawa(x.padic_embedding(p, N)); }

}  // namespace padiclz
