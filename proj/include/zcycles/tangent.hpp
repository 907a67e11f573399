#pragma once

// Exact checks of the tangent-space conditions on V in W^k and on split
// configurations (A_1, ..., A_n) of subspaces of (Q^k)^*.
//
// Layout: a vector of W^k = (Q^n)^k is stored block-major, coordinate a of
// the j-th projection at index j*n + a. Functionals on Q^k are written in
// the basis dual to the natural basis f_1..f_k.

#include "zcycles/linalg.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace zcycles {

using linalg::Vector;

class Subspace {
public:
    explicit Subspace(std::size_t ambient_dim = 0) : ambient_(ambient_dim) {}

    // Rows must be independent (PreconditionViolated otherwise).
    static Subspace from_basis(std::size_t ambient_dim, std::vector<Vector> basis);
    // Keeps a greedy independent subset of the given vectors, in order.
    static Subspace span(std::size_t ambient_dim, const std::vector<Vector>& vectors);
    static Subspace whole(std::size_t ambient_dim);
    // {x : Sum_i x_i = 0}.
    static Subspace kernel_of_sum(std::size_t ambient_dim);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Vector>& basis() const { return basis_; }

    bool contains(const Vector& v) const;
    bool contains(const Subspace& other) const;
    Subspace operator+(const Subspace& other) const;
    Subspace intersect(const Subspace& other) const;
    // Complement for the standard pairing <x, y> = Sum_j x_j y_j.
    Subspace orthogonal_complement() const;

    // Same subspace, regardless of basis.
    friend bool operator==(const Subspace& a, const Subspace& b);

private:
    std::size_t ambient_;
    std::vector<Vector> basis_;
};

Vector hadamard(const Vector& a, const Vector& b);
Vector all_ones(std::size_t k);

struct StarViolation {
    unsigned degree = 0;                     // i
    std::vector<std::size_t> basis_indices;  // increasing i-tuple into V's basis
    std::vector<std::size_t> multi_index;    // increasing i-subset of 0..n-1
    Rational value;                          // nonzero
};

// Sum_j det[(pr_j v^a)_J] for the given basis vectors of V and coordinates J.
Rational evaluate_star_form(const Subspace& v, std::size_t n, std::size_t k,
                            const std::vector<std::size_t>& basis_indices,
                            const std::vector<std::size_t>& multi_index);

// Empty when (*) holds: every summed pullback of an i-form, 1 <= i <=
// min(n, dim V), vanishes on V. Otherwise the first violation in the order
// (i, J, basis tuple). Throws DimensionMismatch unless ambient = n*k.
std::optional<StarViolation> check_condition_star(const Subspace& v, std::size_t n, std::size_t k);

struct DoublestarViolation {
    std::vector<std::size_t> components;    // nonempty increasing subset of 0..n-1
    std::vector<std::size_t> basis_choice;  // one basis index per component
    Rational value;                          // Sum_j prod_l lambda_l(f_j), nonzero
};

// Empty when (**) holds. All subspaces must share the ambient dimension k.
std::optional<DoublestarViolation> check_condition_doublestar(const std::vector<Subspace>& a);

// V = <A_1 e_1, ..., A_n e_n> in (Q^n)^k.
Subspace split_subspace(const std::vector<Subspace>& a);

// Span of all coordinatewise products a∘b.
Subspace product_span(const Subspace& a, const Subspace& b);

struct PairLemmaResult {
    std::size_t lhs = 0;  // dim(A·B + A + B)
    std::size_t rhs = 0;  // dim A + dim B
    bool ok = false;
};

// Conditions: <a, b> = 0 and <a, e> = <b, e> = 0 for all a in A, b in B.
bool pair_conditions_hold(const Subspace& a, const Subspace& b);
// Throws PreconditionViolated when the conditions fail.
PairLemmaResult pair_lemma_check(const Subspace& a, const Subspace& b);

// Rank of (alpha, beta) -> alpha∘pb + pa∘beta on A x B at the point (pa, pb).
std::size_t mu_rank_at(const Subspace& a, const Subspace& b, const Vector& pa, const Vector& pb);
// Max of mu_rank_at over `samples` random points of (e+A) x (e+B).
std::size_t mu_generic_rank(const Subspace& a, const Subspace& b, std::uint64_t seed, unsigned samples = 8);

// A uniformly drawn from small-integer bases of e^perp, then B from small-
// integer combinations of a basis of e^perp ∩ A^perp.
struct AdmissiblePair {
    Subspace a;
    Subspace b;
};
AdmissiblePair random_admissible_pair(std::size_t k, std::uint64_t seed);

// ---------------------------------------------------------------------------

struct SearchResult {
    std::vector<Subspace> best_config;
    std::size_t best_sum = 0;
    std::uint64_t best_candidate = 0;  // index of the first candidate reaching best_sum
    std::string best_strategy;
    std::uint64_t evaluated = 0;
    std::uint64_t passing = 0;  // candidates that ended in a valid configuration
    bool counterexample = false;  // best_sum > k-1
};

// Candidate t is generated from (seed, t) alone: the structured kernel-of-sum
// seed, lifted F_p sweeps, or random sparse starts. Each is repaired to a
// configuration satisfying (**) over Q and extended greedily inside the
// orthogonal complements of the product spans of the other components.
// best_sum and best_candidate do not depend on `workers`.
SearchResult search_max_total_dimension(std::size_t k, std::size_t n, std::uint64_t budget, std::uint64_t seed,
                                        unsigned workers = 1);

// ---------------------------------------------------------------------------

// "k n", then blocks: a line with dim followed by dim rows of integers or
// p/q rationals. '#' starts a comment.
struct SubspaceFile {
    std::size_t k = 0;
    std::size_t n = 0;
    std::vector<std::vector<Vector>> blocks;
};

SubspaceFile parse_subspace_file(std::istream& in);

}  // namespace zcycles
