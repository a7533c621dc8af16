#pragma once

#include <map>
#include <string>
#include <vector>

#include "padiclz/padic.hpp"

namespace padiclz {

using MultiIndex = std::vector<int>;

// Graded-lex: total degree first, then larger exponent of T1 first.
struct GradedLex {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

// Truncated element of W[[T_1, ..., T_d]] with T_i = gamma_i - 1. Monomials of
// total degree > M are discarded. An absent monomial is an exact zero; a
// coefficient that becomes zero to its precision is kept as an explicit
// O(p^k) entry so that order computations stay honest lower bounds.
class IwasawaSeries {
public:
    IwasawaSeries() = default;
    IwasawaSeries(ContextPtr ctx, int vars, int M);

    static IwasawaSeries constant(const PadicScalar& c, int vars, int M);
    static IwasawaSeries variable(const ContextPtr& ctx, int index, int vars, int M);  // T_{index+1}
    // Univariate series from coefficients a_0, a_1, ... (extra entries are dropped).
    static IwasawaSeries from_coefficients(const std::vector<PadicScalar>& a, int M);

    const ContextPtr& context() const { return ctx_; }
    int vars() const { return vars_; }
    int truncation() const { return M_; }
    const std::map<MultiIndex, PadicScalar, GradedLex>& terms() const { return terms_; }

    PadicScalar coefficient(const MultiIndex& e) const;
    PadicScalar coefficient(int k) const { return coefficient(MultiIndex{k}); }
    void set(const MultiIndex& e, const PadicScalar& c);

    IwasawaSeries operator+(const IwasawaSeries& o) const;
    IwasawaSeries operator-(const IwasawaSeries& o) const;
    IwasawaSeries operator*(const IwasawaSeries& o) const;
    IwasawaSeries operator-() const;
    IwasawaSeries scaled(const PadicScalar& c) const;
    IwasawaSeries truncated(int M) const;

    // Substitute T_i -> S_i (each S_i a series without constant term in `vars` variables).
    IwasawaSeries substitute(const std::vector<IwasawaSeries>& S) const;

    // Univariate evaluation at a point t with v(t) >= 1.
    PadicScalar evaluate(const PadicScalar& t) const;

    // One line per monomial "T1^i T2^j : <scalar>" in graded-lex order.
    std::string serialize() const;

private:
    ContextPtr ctx_;
    int vars_ = 1;
    int M_ = 8;
    std::map<MultiIndex, PadicScalar, GradedLex> terms_;

    void check_compatible(const IwasawaSeries& o) const;
};

struct AugOrder {
    int order = 0;
    bool certified = false;
};

struct LeadingTerm {
    int order = 0;
    bool certified = false;
    std::map<MultiIndex, PadicScalar, GradedLex> part;  // homogeneous of degree `order`
};

// A leading coefficient certifies the order when it is a unit or its valuation
// sits at least this many digits below its precision.
constexpr int kCertificationMargin = 4;

AugOrder aug_order(const IwasawaSeries& F);
LeadingTerm leading_term(const IwasawaSeries& F);

// (1+T_i) -> (1+T_i)^{-1} in every variable.
IwasawaSeries involute(const IwasawaSeries& F);

// Two-variable series pushed to one variable along gamma_1 -> gamma^a, gamma_2 -> gamma^b.
IwasawaSeries restrict_series(const IwasawaSeries& F, const mpz_class& a, const mpz_class& b);

// (1+T)^w - 1 truncated at degree M, for an integer w (a p-adic integer given
// by a representative).
IwasawaSeries binomial_power_minus_one(const ContextPtr& ctx, const mpz_class& w, int M);

// Derivative in t at t = 0 of t -> F(gamma^t - 1), gamma = 1 + p, estimated by
// the forward-difference expansion sum_{i=1}^{K} (-1)^{i+1} Delta^i F(0) / i.
// With K = 1 this is the first divided difference F(p) - F(0). K = 0 picks the
// number of terms needed for full precision.
PadicScalar finite_difference_derivative(const IwasawaSeries& F, int K = 0);

// chi_cyc-evaluation of a univariate leading term c T^s: c * log_p(1+p)^s.
PadicScalar chi_cyc_evaluate(const LeadingTerm& lt, const ContextPtr& ctx);

}  // namespace padiclz
