#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace padiclz {

// A finite commutative ring (Z/p^a)[G], G abelian given by invariant factors
// (empty for Z/p^a). Elements are integers in [0, size()); element x has
// coefficient vector digits of x in base p^a, one digit per group element.
class FiniteRing {
public:
    static FiniteRing integers_mod(long pa);
    static FiniteRing group_ring(long pa, const std::vector<int>& invariants);

    int size() const { return size_; }
    long coefficient_modulus() const { return pa_; }
    const std::vector<int>& invariants() const { return inv_; }
    std::string describe() const;

    int add(int a, int b) const { return add_[a * size_ + b]; }
    int mul(int a, int b) const { return mul_[a * size_ + b]; }
    int neg(int a) const { return neg_[a]; }
    int sub(int a, int b) const { return add(a, neg(b)); }
    int zero() const { return 0; }
    int one() const { return one_; }
    int from_integer(long n) const;

    std::vector<long> coefficients(int x) const;
    int from_coefficients(const std::vector<long>& c) const;

    // Reduction to (Z/q)[G] for q | p^a, with the index map.
    FiniteRing quotient(long q) const;
    int reduce_to(const FiniteRing& target, int x) const;

    // Verifies commutativity, associativity, distributivity and the identity.
    bool verify_axioms() const;

private:
    long pa_ = 2;
    std::vector<int> inv_;
    int order_ = 1;  // |G|
    int size_ = 2;
    int one_ = 1;
    std::vector<int> add_, mul_, neg_;
    void build();
};

using ModElem = std::vector<int>;

// M = ker(A: R^{n1} -> R^{n2}), A given as an n2 x n1 matrix; I = im(A).
struct PresentedModule {
    FiniteRing R = FiniteRing::integers_mod(2);
    int n1 = 1;
    int n2 = 1;
    std::vector<std::vector<int>> A;

    ModElem apply(const ModElem& x) const;
    std::vector<ModElem> elements() const;  // enumerated kernel
    std::vector<ModElem> image() const;
    PresentedModule base_change(long q) const;  // reduce modulo q
};

// Index sets {i_1 < ... < i_r} of [0, n), lexicographic.
std::vector<std::vector<int>> wedge_basis(int n, int r);

// An enumerated submodule of wedge^r P^1 in coordinates on wedge_basis(n1, r).
struct WedgeSubmodule {
    int n = 0;
    int r = 0;
    std::vector<ModElem> elements;    // sorted
    std::vector<ModElem> generators;  // generates elements over R
};

// Refuses enumerations with |R|^rank above this bound ("instance-too-large").
constexpr double kEnumerationLimit = 1e6;

// ker(wedge^r P^1 -> I (x) wedge^{r-1} P^1), x_1 ^ ... ^ x_r -> sum (-1)^{i-1} A x_i (x) (...).
WedgeSubmodule bidual(const PresentedModule& M, int r);

// (wedge^r Hom(M, R))^* by enumeration of Hom(M, R) and of alternating forms on it,
// pushed into wedge^r P^1 through the restrictions of the coordinate functionals.
// injective reports whether distinct forms have distinct images.
struct DoubleDual {
    WedgeSubmodule image;
    std::size_t form_count = 0;
    bool injective = false;
    bool restriction_surjective = false;  // (P^1)^* -> M^*
};
DoubleDual brute_force_double_dual(const PresentedModule& M, int r);

// x_1 ^ ... ^ x_r in coordinates (the r x r minors).
ModElem wedge_of(const FiniteRing& R, int n, const std::vector<ModElem>& xs);

// phi_r o ... o phi_1 applied to x in wedge^s R^n, each phi a functional on R^n
// given by its values on the basis. Throws "arity-mismatch" when s < r.
ModElem wedge_contract(const FiniteRing& R, int n, const std::vector<ModElem>& phis, const ModElem& x, int s);

// Span of a set of vectors over R (enumerated, sorted).
std::vector<ModElem> span(const FiniteRing& R, const std::vector<ModElem>& gens, std::size_t dim);

// Every (Z/p^a)[G] with |R| <= max_size, G abelian (given by invariant factors),
// ordered by size and then by description.
std::vector<FiniteRing> small_rings(int max_size);

// Uniformly random n2 x n1 presentation matrix over R.
PresentedModule random_module(const FiniteRing& R, int n1, int n2, std::mt19937_64& rng);

// M = ker([0 | I_extra] U^{-1}) for a random invertible U built from elementary
// column operations, so M is free on the first `rank` columns of U (`basis`).
struct FreeInstance {
    PresentedModule module;
    std::vector<ModElem> basis;
};
FreeInstance random_free_module(const FiniteRing& R, int rank, int extra, std::mt19937_64& rng);

}  // namespace padiclz
