#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "padiclz/characters.hpp"
#include "padiclz/iwasawa.hpp"

namespace padiclz {

// Order of vanishing at s = 0 of L(s, psi) and the corresponding leading value.
struct ArchLValue {
    DirichletCharacter chi;  // primitive
    int order = 0;
    CycRational exact;       // L(0, psi) = -B_{1,psi} when order = 0
    std::complex<long double> value;  // L(0) or L'(0)
    long double error = 0;
};

ArchLValue arch_value_at_zero(const DirichletCharacter& psi);

struct ArchLeadingTerm {
    int order = 1;
    std::complex<long double> value;
    long double error = 0;
    ArchLValue vanishing_factor;  // the even character, contributes L'(0)
    ArchLValue value_factor;      // the odd character, contributes L(0)
};

// Leading term at s = 0 of L(chi^{-1}, s) = L(chi_Q^{-1}, s) L(chi_Q^{-1} eps_k, s).
ArchLeadingTerm arch_leading_term_base_change(const HeckeSetup& s);

// Computes the moments g_k = int rho(x) binom(s(x), k) dE_1(x), s(x) = log_p<x>/log_p(1+p),
// for rho = chi * omega^i with chi primitive of conductor d > 1 prime to p. The
// integral is assembled from exact Taylor moments on the balls A + d p^m Z_p,
// so the result is exact to the working precision for every depth m >= 2.
class KLEngine {
public:
    KLEngine(long p, int depth, int M, int N);

    static std::shared_ptr<KLEngine> get(long p, int depth, int M, int N);

    long prime() const { return p_; }
    int depth() const { return m_; }
    int truncation() const { return M_; }
    int precision() const { return N_; }
    int taylor_order() const { return R_; }
    int working_precision() const { return W_; }

    std::vector<PadicScalar> moments(const DirichletCharacter& chi, long i);

private:
    long p_;
    int m_, M_, N_;
    int E_ = 0, E2_ = 0, R_ = 0, W_ = 0;
    mpz_class P_;
    std::vector<long> A_;                       // units in [1, p^m)
    std::vector<std::vector<mpz_class>> binom_;  // binom(s_A, kappa), kappa <= M
    std::vector<mpz_class> inv_A_;
    std::vector<mpz_class> teich_;               // omega(a) for a in [0, p)
    std::vector<std::vector<mpz_class>> qhat_;   // p^E * coefficient of w^r in binom(lambda(w), l)
    std::map<std::pair<long, long>, std::vector<std::vector<std::vector<mpz_class>>>> S_;  // (d,i) -> [b][k][r]
    std::mutex mu_;

    const std::vector<std::vector<std::vector<mpz_class>>>& s_table(long d, long i);
    mpz_class to_residue(const mpq_class& q, int shift) const;  // q * p^shift mod P
};

// The Kubota-Leopoldt series of psi = chi * omega^j: L_p(s, psi) = G((1+p)^s - 1).
struct KLSeries {
    DirichletCharacter tame;  // primitive, conductor prime to p
    long j = 1;
    long p = 5;
    int depth = 4;
    int precision = 20;
    IwasawaSeries series;

    // L_p(1-n, psi) read off the series.
    PadicScalar value_at_one_minus(int n) const;
};

KLSeries kl_series(const DirichletCharacter& chi, long j, long p, int depth = 4, int M = 20, int N = 20);

// -(1 - phi(p) p^{n-1}) B_{n,phi} / n with phi = primitive(chi omega^{j-n}).
PadicScalar kl_interpolation_value(const DirichletCharacter& chi, long j, long p, int n, int N);

// Twist and inverse conventions for the two cyclotomic-line factors.
struct GrossConvention {
    bool twist_omega = true;  // twist odd base characters by omega
    bool inverse = false;     // use the inverse of each branch character
};
constexpr GrossConvention kFrozenGrossConvention{true, false};

struct GrossBranch {
    DirichletCharacter tame;
    long j = 0;
};

// Branches psi_1 (from chi_Q) and psi_2 (from chi_Q eps_k); throws "odd-branch"
// when a convention produces an odd character.
std::pair<GrossBranch, GrossBranch> gross_branches(const HeckeSetup& s, GrossConvention c);

struct KatzCyclotomic {
    std::string period = "c_period";  // undetermined unit, never given a value
    KLSeries first;
    KLSeries second;
    IwasawaSeries second_reflected;  // G_2(u (1+T)^{-1} - 1): the s -> 1-s factor
    IwasawaSeries series;            // first * second_reflected; the output is period * series
};

KatzCyclotomic katz_cyclotomic(const HeckeSetup& s, int depth = 4, int M = 20, int N = 20,
                               GrossConvention c = kFrozenGrossConvention);

// F(u (1+T)^{-1} - 1), u = 1 + p, with per-coefficient precision reflecting the truncated tail.
IwasawaSeries reflect_s_to_one_minus_s(const IwasawaSeries& F);

}  // namespace padiclz
