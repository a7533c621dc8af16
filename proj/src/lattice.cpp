#include "padiclz/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "padiclz/error.hpp"

namespace padiclz {

// ---------------------------------------------------------------------------
// FiniteRing

FiniteRing FiniteRing::integers_mod(long pa) { return group_ring(pa, {}); }

FiniteRing FiniteRing::group_ring(long pa, const std::vector<int>& invariants) {
    if (pa < 2) throw Error("invalid-ring", "coefficient modulus must be at least 2");
    FiniteRing R;
    R.pa_ = pa;
    R.inv_ = invariants;
    R.order_ = 1;
    for (int n : invariants) {
        if (n < 1) throw Error("invalid-ring", "invariant factors must be positive");
        R.order_ *= n;
    }
    const double sz = std::pow(static_cast<double>(pa), R.order_);
    if (sz > 4096) throw Error("instance-too-large", "ring has more than 4096 elements");
    R.size_ = static_cast<int>(std::lround(sz));
    R.build();
    return R;
}

std::string FiniteRing::describe() const {
    std::ostringstream os;
    os << "Z/" << pa_;
    if (!inv_.empty()) {
        os << "[";
        for (size_t i = 0; i < inv_.size(); ++i) os << (i ? "xC" : "C") << inv_[i];
        os << "]";
    }
    return os.str();
}

std::vector<long> FiniteRing::coefficients(int x) const {
    std::vector<long> c(order_);
    for (int i = 0; i < order_; ++i) {
        c[i] = x % pa_;
        x = static_cast<int>(x / pa_);
    }
    return c;
}

int FiniteRing::from_coefficients(const std::vector<long>& c) const {
    long x = 0;
    for (int i = order_ - 1; i >= 0; --i) x = x * pa_ + ((c[i] % pa_) + pa_) % pa_;
    return static_cast<int>(x);
}

int FiniteRing::from_integer(long n) const {
    std::vector<long> c(order_, 0);
    c[0] = n;
    return from_coefficients(c);
}

void FiniteRing::build() {
    // Group elements in mixed radix over the invariant factors.
    auto gsum = [&](int a, int b) {
        int r = 0, mult = 1;
        for (int n : inv_) {
            r += ((a % n + b % n) % n) * mult;
            a /= n;
            b /= n;
            mult *= n;
        }
        return r;
    };
    std::vector<std::vector<long>> co(size_);
    for (int x = 0; x < size_; ++x) co[x] = coefficients(x);
    add_.assign(static_cast<size_t>(size_) * size_, 0);
    mul_.assign(static_cast<size_t>(size_) * size_, 0);
    neg_.assign(size_, 0);
    for (int a = 0; a < size_; ++a) {
        std::vector<long> n(order_);
        for (int i = 0; i < order_; ++i) n[i] = -co[a][i];
        neg_[a] = from_coefficients(n);
        for (int b = 0; b < size_; ++b) {
            std::vector<long> s(order_), m(order_, 0);
            for (int i = 0; i < order_; ++i) s[i] = co[a][i] + co[b][i];
            for (int i = 0; i < order_; ++i)
                if (co[a][i])
                    for (int j = 0; j < order_; ++j) m[gsum(i, j)] = (m[gsum(i, j)] + co[a][i] * co[b][j]) % pa_;
            add_[a * size_ + b] = from_coefficients(s);
            mul_[a * size_ + b] = from_coefficients(m);
        }
    }
    one_ = from_integer(1);
}

FiniteRing FiniteRing::quotient(long q) const {
    if (q < 2 || pa_ % q != 0) throw Error("invalid-ring", "quotient modulus must divide the coefficient modulus");
    return group_ring(q, inv_);
}

int FiniteRing::reduce_to(const FiniteRing& target, int x) const {
    return target.from_coefficients(coefficients(x));
}

bool FiniteRing::verify_axioms() const {
    for (int a = 0; a < size_; ++a) {
        if (mul(a, one_) != a || add(a, 0) != a || add(a, neg(a)) != 0) return false;
        for (int b = 0; b < size_; ++b) {
            if (mul(a, b) != mul(b, a) || add(a, b) != add(b, a)) return false;
            for (int c = 0; c < size_; ++c) {
                if (mul(mul(a, b), c) != mul(a, mul(b, c))) return false;
                if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c))) return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Enumeration helpers

namespace {

void guard(int ring_size, std::size_t rank) {
    if (std::pow(static_cast<double>(ring_size), static_cast<double>(rank)) > kEnumerationLimit)
        throw Error("instance-too-large", "|R|^" + std::to_string(rank) + " exceeds the enumeration limit");
}

// Calls f on every vector in R^dim.
template <class F>
void for_each_vector(int q, std::size_t dim, F&& f) {
    if (q == 0 && dim > 0) return;
    ModElem v(dim, 0);
    while (true) {
        f(static_cast<const ModElem&>(v));
        std::size_t i = 0;
        while (i < dim && ++v[i] == q) v[i++] = 0;
        if (i == dim) break;
    }
}

// A finite R-module given by an explicit element list with operation tables.
struct Enumerated {
    const FiniteRing* R = nullptr;
    std::vector<ModElem> elems;        // elems[0] is zero
    std::map<ModElem, int> index;
    std::vector<int> add;              // n x n
    std::vector<int> smul;             // |R| x n

    int n() const { return static_cast<int>(elems.size()); }
    int plus(int a, int b) const { return add[static_cast<size_t>(a) * n() + b]; }
    int times(int r, int a) const { return smul[static_cast<size_t>(r) * n() + a]; }
};

// Elements are vectors over R with pointwise operations; the list must be closed.
Enumerated enumerate_module(const FiniteRing& R, std::vector<ModElem> elems) {
    Enumerated E;
    E.R = &R;
    std::sort(elems.begin(), elems.end());
    // Zero first.
    const ModElem zero(elems.empty() ? 0 : elems[0].size(), 0);
    auto z = std::find(elems.begin(), elems.end(), zero);
    if (z == elems.end()) throw Error("not-a-module", "zero missing");
    std::rotate(elems.begin(), z, z + 1);
    E.elems = std::move(elems);
    for (int i = 0; i < E.n(); ++i) E.index[E.elems[i]] = i;
    const int n = E.n();
    E.add.assign(static_cast<size_t>(n) * n, 0);
    E.smul.assign(static_cast<size_t>(R.size()) * n, 0);
    const std::size_t d = E.elems[0].size();
    ModElem t(d);
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            for (std::size_t i = 0; i < d; ++i) t[i] = R.add(E.elems[a][i], E.elems[b][i]);
            auto it = E.index.find(t);
            if (it == E.index.end()) throw Error("not-a-module", "not closed under addition");
            E.add[static_cast<size_t>(a) * n + b] = E.add[static_cast<size_t>(b) * n + a] = it->second;
        }
        for (int r = 0; r < R.size(); ++r) {
            for (std::size_t i = 0; i < d; ++i) t[i] = R.mul(r, E.elems[a][i]);
            auto it = E.index.find(t);
            if (it == E.index.end()) throw Error("not-a-module", "not closed under scalars");
            E.smul[static_cast<size_t>(r) * n + a] = it->second;
        }
    }
    return E;
}

std::vector<char> span_mask(const Enumerated& E, const std::vector<int>& gens) {
    std::vector<char> in(E.n(), 0);
    std::vector<int> cur{0};
    in[0] = 1;
    for (int g : gens) {
        std::vector<int> next;
        for (int s : cur)
            for (int r = 0; r < E.R->size(); ++r) {
                const int t = E.plus(s, E.times(r, g));
                if (!in[t]) {
                    in[t] = 1;
                    next.push_back(t);
                }
            }
        // Elements reached so far are closed under adding multiples of earlier generators.
        cur.insert(cur.end(), next.begin(), next.end());
    }
    return in;
}

// Greedy generating set, each step adding the element that enlarges the span most.
std::vector<int> greedy_generators(const Enumerated& E) {
    std::vector<int> gens;
    std::vector<char> in = span_mask(E, gens);
    auto count = [](const std::vector<char>& m) { return std::count(m.begin(), m.end(), 1); };
    while (count(in) < E.n()) {
        int best = -1;
        long best_size = -1;
        for (int m = 1; m < E.n(); ++m) {
            if (in[m]) continue;
            std::vector<int> trial = gens;
            trial.push_back(m);
            const long sz = count(span_mask(E, trial));
            if (sz > best_size) {
                best_size = sz;
                best = m;
            }
        }
        gens.push_back(best);
        in = span_mask(E, gens);
    }
    return gens;
}

int sort_sign(std::vector<int>& idx) {
    int sign = 1;
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i + 1; j < idx.size(); ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) {
                std::swap(idx[i], idx[j]);
                sign = -sign;
            }
        }
    return sign;
}

std::map<std::vector<int>, int> subset_index(int n, int r) {
    std::map<std::vector<int>, int> m;
    const auto b = wedge_basis(n, r);
    for (size_t i = 0; i < b.size(); ++i) m[b[i]] = static_cast<int>(i);
    return m;
}

int signed_term(const FiniteRing& R, int sign, int v) { return sign > 0 ? v : (sign < 0 ? R.neg(v) : 0); }

WedgeSubmodule finish(const FiniteRing& R, int n, int r, std::vector<ModElem> elems) {
    WedgeSubmodule W;
    W.n = n;
    W.r = r;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (!elems.empty() && !elems[0].empty()) {
        const Enumerated E = enumerate_module(R, elems);
        for (int g : greedy_generators(E)) W.generators.push_back(E.elems[g]);
    }
    W.elements = std::move(elems);
    return W;
}

}  // namespace

std::vector<std::vector<int>> wedge_basis(int n, int r) {
    std::vector<std::vector<int>> out;
    if (r < 0 || r > n) return out;
    std::vector<int> cur(r);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        int i = r - 1;
        while (i >= 0 && cur[i] == n - r + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

std::vector<ModElem> span(const FiniteRing& R, const std::vector<ModElem>& gens, std::size_t dim) {
    std::vector<ModElem> cur{ModElem(dim, 0)};
    std::map<ModElem, char> seen{{cur[0], 1}};
    for (const auto& g : gens) {
        std::vector<ModElem> next;
        for (const auto& s : cur)
            for (int r = 0; r < R.size(); ++r) {
                ModElem t(dim);
                for (std::size_t i = 0; i < dim; ++i) t[i] = R.add(s[i], R.mul(r, g[i]));
                if (seen.emplace(t, 1).second) next.push_back(t);
            }
        cur.insert(cur.end(), next.begin(), next.end());
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

// ---------------------------------------------------------------------------
// PresentedModule

ModElem PresentedModule::apply(const ModElem& x) const {
    ModElem y(n2, 0);
    for (int k = 0; k < n2; ++k)
        for (int i = 0; i < n1; ++i) y[k] = R.add(y[k], R.mul(A[k][i], x[i]));
    return y;
}

std::vector<ModElem> PresentedModule::elements() const {
    guard(R.size(), n1);
    std::vector<ModElem> out;
    const ModElem zero(n2, 0);
    for_each_vector(R.size(), n1, [&](const ModElem& x) {
        if (apply(x) == zero) out.push_back(x);
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ModElem> PresentedModule::image() const {
    guard(R.size(), n1);
    std::vector<ModElem> out;
    for_each_vector(R.size(), n1, [&](const ModElem& x) { out.push_back(apply(x)); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PresentedModule PresentedModule::base_change(long q) const {
    PresentedModule B;
    B.R = R.quotient(q);
    B.n1 = n1;
    B.n2 = n2;
    B.A = A;
    for (auto& row : B.A)
        for (auto& a : row) a = R.reduce_to(B.R, a);
    return B;
}

// ---------------------------------------------------------------------------
// Exterior bi-dual

WedgeSubmodule bidual(const PresentedModule& M, int r) {
    const FiniteRing& R = M.R;
    if (r < 0) throw Error("arity-mismatch", "negative wedge degree");
    if (r == 0) {
        std::vector<ModElem> all;
        for (int a = 0; a < R.size(); ++a) all.push_back({a});
        return finish(R, M.n1, 0, all);
    }
    const auto basis = wedge_basis(M.n1, r);
    if (basis.empty()) return finish(R, M.n1, r, {ModElem{}});
    guard(R.size(), basis.size());
    const auto lower = subset_index(M.n1, r - 1);
    const std::size_t out_dim = static_cast<std::size_t>(M.n2) * lower.size();
    // Contraction matrix: column I, row (k, J) with J = I minus I_t, entry (-1)^t A[k][I_t].
    std::vector<std::vector<std::pair<std::size_t, int>>> cols(basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c)
        for (int t = 0; t < r; ++t) {
            std::vector<int> J = basis[c];
            J.erase(J.begin() + t);
            const std::size_t j = static_cast<std::size_t>(lower.at(J));
            for (int k = 0; k < M.n2; ++k)
                cols[c].push_back({static_cast<std::size_t>(k) * lower.size() + j,
                                   signed_term(R, t % 2 ? -1 : 1, M.A[k][basis[c][t]])});
        }
    std::vector<ModElem> kernel;
    std::vector<int> y(out_dim);
    for_each_vector(R.size(), basis.size(), [&](const ModElem& x) {
        std::fill(y.begin(), y.end(), 0);
        for (std::size_t c = 0; c < basis.size(); ++c)
            if (x[c])
                for (const auto& [row, a] : cols[c]) y[row] = R.add(y[row], R.mul(a, x[c]));
        if (std::all_of(y.begin(), y.end(), [](int v) { return v == 0; })) kernel.push_back(x);
    });
    return finish(R, M.n1, r, std::move(kernel));
}

DoubleDual brute_force_double_dual(const PresentedModule& M, int r) {
    const FiniteRing& R = M.R;
    const int q = R.size();
    DoubleDual out;
    // M and a small generating set.
    const Enumerated EM = enumerate_module(R, M.elements());
    const std::vector<int> mg = greedy_generators(EM);
    guard(q, 2 * mg.size());
    // Hom(M, R): values on the generators, kept when consistent on all of M.
    std::vector<ModElem> duals;
    for_each_vector(q, mg.size(), [&](const ModElem& v) {
        std::vector<int> val(EM.n(), -1);
        bool ok = true;
        for_each_vector(q, mg.size(), [&](const ModElem& c) {
            if (!ok) return;
            int m = 0, fv = 0;
            for (std::size_t j = 0; j < mg.size(); ++j) {
                m = EM.plus(m, EM.times(c[j], mg[j]));
                fv = R.add(fv, R.mul(c[j], v[j]));
            }
            if (val[m] < 0) val[m] = fv;
            else if (val[m] != fv) ok = false;
        });
        if (ok) duals.push_back(ModElem(val.begin(), val.end()));
    });
    const Enumerated ED = enumerate_module(R, duals);
    const std::vector<int> dg = greedy_generators(ED);
    const int k = static_cast<int>(dg.size());

    // Restrictions of the coordinate functionals of P^1, and their coordinates on dg.
    std::vector<int> coord_index(M.n1);
    for (int i = 0; i < M.n1; ++i) {
        ModElem f(EM.n());
        for (int m = 0; m < EM.n(); ++m) f[m] = EM.elems[m][i];
        coord_index[i] = ED.index.at(f);
    }
    const std::vector<char> restricted = span_mask(ED, coord_index);
    out.restriction_surjective = std::count(restricted.begin(), restricted.end(), 1) == ED.n();
    guard(q, k);
    std::vector<ModElem> relations;
    std::vector<ModElem> coord_coeffs(M.n1);
    std::vector<char> have(M.n1, 0);
    for_each_vector(q, k, [&](const ModElem& c) {
        int f = 0;
        for (int j = 0; j < k; ++j) f = ED.plus(f, ED.times(c[j], dg[j]));
        if (f == 0) relations.push_back(c);
        for (int i = 0; i < M.n1; ++i)
            if (!have[i] && f == coord_index[i]) {
                coord_coeffs[i] = c;
                have[i] = 1;
            }
    });

    if (r == 0) {
        std::vector<ModElem> all;
        for (int a = 0; a < q; ++a) all.push_back({a});
        out.image = finish(R, M.n1, 0, all);
        out.form_count = static_cast<std::size_t>(q);
        out.injective = true;
        return out;
    }
    const auto fbasis = wedge_basis(k, r);
    const auto fidx = subset_index(k, r);
    const auto pbasis = wedge_basis(M.n1, r);
    guard(q, fbasis.size());
    std::vector<ModElem> images;
    std::size_t forms = 0;
    // Alternating forms T on R^k, T(e_j ^ e_S) summed against each relation must vanish.
    const auto lower = wedge_basis(k, r - 1);
    auto T_at = [&](const ModElem& T, std::vector<int> idx) {
        const int s = sort_sign(idx);
        if (s == 0) return 0;
        return signed_term(R, s, T[fidx.at(idx)]);
    };
    for_each_vector(q, fbasis.size(), [&](const ModElem& T) {
        for (const auto& c : relations)
            for (const auto& S : lower) {
                int acc = 0;
                for (int j = 0; j < k; ++j) {
                    if (!c[j]) continue;
                    std::vector<int> idx{j};
                    idx.insert(idx.end(), S.begin(), S.end());
                    acc = R.add(acc, R.mul(c[j], T_at(T, idx)));
                }
                if (acc != 0) return;
            }
        ++forms;
        // x_I = T(e*_{I_1}|M ^ ... ^ e*_{I_r}|M), expanded multilinearly in the generators.
        ModElem x(pbasis.size(), 0);
        for (std::size_t b = 0; b < pbasis.size(); ++b) {
            int acc = 0;
            ModElem js(r, 0);
            for_each_vector(k, r, [&](const ModElem& jv) {
                int coef = R.one();
                for (int t = 0; t < r; ++t) coef = R.mul(coef, coord_coeffs[pbasis[b][t]][jv[t]]);
                if (coef) acc = R.add(acc, R.mul(coef, T_at(T, std::vector<int>(jv.begin(), jv.end()))));
            });
            x[b] = acc;
        }
        images.push_back(std::move(x));
    });
    out.form_count = forms;
    out.image = finish(R, M.n1, r, images);
    out.injective = out.image.elements.size() == forms;
    return out;
}

ModElem wedge_of(const FiniteRing& R, int n, const std::vector<ModElem>& xs) {
    const int r = static_cast<int>(xs.size());
    const auto basis = wedge_basis(n, r);
    if (r == 0) return {R.one()};
    ModElem out(basis.size(), 0);
    std::vector<int> perm(r);
    for (std::size_t b = 0; b < basis.size(); ++b) {
        std::iota(perm.begin(), perm.end(), 0);
        int acc = 0;
        do {
            std::vector<int> tmp = perm;
            const int s = sort_sign(tmp);
            int term = R.one();
            for (int t = 0; t < r; ++t) term = R.mul(term, xs[t][basis[b][perm[t]]]);
            acc = R.add(acc, signed_term(R, s, term));
        } while (std::next_permutation(perm.begin(), perm.end()));
        out[b] = acc;
    }
    return out;
}

ModElem wedge_contract(const FiniteRing& R, int n, const std::vector<ModElem>& phis, const ModElem& x, int s) {
    if (s < static_cast<int>(phis.size())) throw Error("arity-mismatch", "more functionals than wedge factors");
    if (x.size() != wedge_basis(n, s).size()) throw Error("arity-mismatch", "element does not lie in wedge^s");
    ModElem cur = x;
    int deg = s;
    for (const auto& phi : phis) {
        if (static_cast<int>(phi.size()) != n) throw Error("arity-mismatch", "functional has the wrong length");
        const auto basis = wedge_basis(n, deg);
        const auto lower = subset_index(n, deg - 1);
        ModElem next(lower.size(), 0);
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (!cur[b]) continue;
            for (int t = 0; t < deg; ++t) {
                std::vector<int> J = basis[b];
                J.erase(J.begin() + t);
                const int term = R.mul(phi[basis[b][t]], cur[b]);
                int& slot = next[lower.at(J)];
                slot = R.add(slot, signed_term(R, t % 2 ? -1 : 1, term));
            }
        }
        cur = std::move(next);
        --deg;
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Instance generators

namespace {

// Invariant-factor lists d_1 | d_2 | ... (d_i >= 2) whose product stays within `bound`.
void invariant_lists(int bound, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    const int prod = std::accumulate(cur.begin(), cur.end(), 1, std::multiplies<int>());
    const int start = cur.empty() ? 2 : cur.back();
    for (int d = start; prod * d <= bound; d += cur.empty() ? 1 : cur.back()) {
        cur.push_back(d);
        out.push_back(cur);
        invariant_lists(bound, cur, out);
        cur.pop_back();
    }
}

bool is_prime_power(long n) {
    if (n < 2) return false;
    long q = 2;
    while (n % q != 0) ++q;
    while (n % q == 0) n /= q;
    return n == 1;
}

}  // namespace

std::vector<FiniteRing> small_rings(int max_size) {
    std::vector<std::vector<int>> groups{{}};
    std::vector<int> cur;
    invariant_lists(std::max(1, static_cast<int>(std::log2(std::max(2, max_size)))), cur, groups);
    std::vector<FiniteRing> out;
    for (long pa = 2; pa <= max_size; ++pa) {
        if (!is_prime_power(pa)) continue;
        for (const auto& g : groups) {
            const int order = std::accumulate(g.begin(), g.end(), 1, std::multiplies<int>());
            if (std::pow(static_cast<double>(pa), order) > max_size) continue;
            out.push_back(FiniteRing::group_ring(pa, g));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const FiniteRing& a, const FiniteRing& b) {
        return a.size() != b.size() ? a.size() < b.size() : a.describe() < b.describe();
    });
    return out;
}

PresentedModule random_module(const FiniteRing& R, int n1, int n2, std::mt19937_64& rng) {
    PresentedModule M;
    M.R = R;
    M.n1 = n1;
    M.n2 = n2;
    std::uniform_int_distribution<int> elem(0, R.size() - 1);
    M.A.assign(n2, std::vector<int>(n1));
    for (auto& row : M.A)
        for (auto& a : row) a = elem(rng);
    return M;
}

FreeInstance random_free_module(const FiniteRing& R, int rank, int extra, std::mt19937_64& rng) {
    const int n = rank + extra;
    std::vector<int> units;
    for (int x = 0; x < R.size(); ++x)
        for (int y = 0; y < R.size(); ++y)
            if (R.mul(x, y) == R.one()) {
                units.push_back(x);
                break;
            }
    auto inverse = [&](int u) {
        for (int y = 0; y < R.size(); ++y)
            if (R.mul(u, y) == R.one()) return y;
        throw Error("not-invertible");
    };
    // U and V = U^{-1} start at I; each step sets U <- U E and V <- E^{-1} V.
    std::vector<std::vector<int>> U(n, std::vector<int>(n, 0)), V = U;
    for (int i = 0; i < n; ++i) U[i][i] = V[i][i] = R.one();
    std::uniform_int_distribution<int> col(0, n - 1), elem(0, R.size() - 1), unit(0, static_cast<int>(units.size()) - 1);
    for (int step = 0; step < 4 * n * n; ++step) {
        const int i = col(rng), j = col(rng);
        if (i != j) {
            // E = I + c e_ij: column j += c column i on U, row i -= c row j on V.
            const int c = elem(rng);
            for (auto& row : U) row[j] = R.add(row[j], R.mul(c, row[i]));
            for (int k = 0; k < n; ++k) V[i][k] = R.sub(V[i][k], R.mul(c, V[j][k]));
        } else {
            const int u = units[unit(rng)], ui = inverse(u);
            for (auto& row : U) row[i] = R.mul(row[i], u);
            for (int k = 0; k < n; ++k) V[i][k] = R.mul(V[i][k], ui);
        }
    }
    std::vector<std::vector<int>> A(V.begin() + rank, V.end());
    FreeInstance out;
    out.module.R = R;
    out.module.n1 = n;
    out.module.n2 = std::max(extra, 1);
    out.module.A = extra > 0 ? A : std::vector<std::vector<int>>{std::vector<int>(n, 0)};
    for (int c = 0; c < rank; ++c) {
        ModElem b(n);
        for (int r = 0; r < n; ++r) b[r] = U[r][c];
        out.basis.push_back(b);
    }
    return out;
}

}  // namespace padiclz
