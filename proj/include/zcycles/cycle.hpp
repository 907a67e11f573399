#pragma once

// Zero-cycles with rational coefficients on a free abelian group Z^r, with
// the Pontryagin product as group-ring convolution.
//
// Points of a "very general" abelian variety are modeled by independent
// generators x_1, ..., x_r of Z^r. Every identity that holds here holds after
// specializing the generators to actual points. The ring is kept free:
// nothing in this header ever rewrites a product to zero. The nilpotency of
// the augmentation ideal enters only through the explicit predicate
// in_augmentation_power() and through the certificate engine.

#include "zcycles/errors.hpp"
#include "zcycles/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

namespace zcycles {

class GroupPoint {
public:
    GroupPoint() = default;
    explicit GroupPoint(std::vector<Integer> coords) : coords_(std::move(coords)) {}
    GroupPoint(std::initializer_list<long> coords);

    static GroupPoint origin(std::size_t rank);
    // The designated generator x_{index+1}.
    static GroupPoint generator(std::size_t rank, std::size_t index);

    std::size_t rank() const { return coords_.size(); }
    const std::vector<Integer>& coords() const { return coords_; }
    const Integer& operator[](std::size_t i) const { return coords_[i]; }

    bool is_origin() const;
    // Sum of absolute coordinates: the total height in the generators.
    Integer height() const;

    GroupPoint operator+(const GroupPoint& other) const;
    GroupPoint operator-() const;
    // Image under multiplication by n on the group.
    GroupPoint scaled(const Integer& n) const;

    friend bool operator==(const GroupPoint& a, const GroupPoint& b) { return a.coords_ == b.coords_; }
    friend bool operator!=(const GroupPoint& a, const GroupPoint& b) { return !(a == b); }
    // Lexicographic on coordinates; this is also the canonical output order.
    friend bool operator<(const GroupPoint& a, const GroupPoint& b);

private:
    std::vector<Integer> coords_;
};

// A finitely supported map GroupPoint -> Rational with no stored zeros.
class Cycle {
public:
    using Terms = std::map<GroupPoint, Rational>;

    explicit Cycle(std::size_t rank = 0) : rank_(rank) {}
    // Merges repeated points and drops zero coefficients.
    Cycle(std::size_t rank, const std::vector<std::pair<GroupPoint, Rational>>& terms);

    static Cycle zero(std::size_t rank) { return Cycle(rank); }
    // {0_A}, the unit for the Pontryagin product.
    static Cycle unit(std::size_t rank);
    static Cycle point(const GroupPoint& p, const Rational& coeff = 1);

    std::size_t rank() const { return rank_; }
    const Terms& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coeff(const GroupPoint& p) const;
    Integer max_height() const;

    Cycle operator+(const Cycle& other) const;
    Cycle operator-(const Cycle& other) const;
    Cycle operator-() const;
    Cycle operator*(const Rational& s) const;
    Cycle operator/(const Rational& s) const;

    friend bool operator==(const Cycle& a, const Cycle& b) { return a.rank_ == b.rank_ && a.terms_ == b.terms_; }
    friend bool operator!=(const Cycle& a, const Cycle& b) { return !(a == b); }

    // Adds coeff * {p} in place; used by builders, never on shared values.
    void accumulate(const GroupPoint& p, const Rational& coeff);

private:
    std::size_t rank_;
    Terms terms_;
};

inline Cycle operator*(const Rational& s, const Cycle& c) { return c * s; }

// Rank r, geometric dimension g and the support cap N. The nilpotency order
// of the augmentation ideal is g + 1.
class RingContext {
public:
    RingContext(std::size_t rank, unsigned geom_dim, std::uint64_t support_cap);

    std::size_t rank() const { return rank_; }
    unsigned geom_dim() const { return geom_dim_; }
    unsigned nilpotency_order() const { return geom_dim_ + 1; }
    std::uint64_t support_cap() const { return support_cap_; }

    // Throws SupportCapExceeded if some point of c is higher than the cap.
    void check_support(const Cycle& c, const char* what) const;

private:
    std::size_t rank_;
    unsigned geom_dim_;
    std::uint64_t support_cap_;
};

Cycle cycle_add(const Cycle& a, const Cycle& b);

// Convolution. The OpenMP kernel splits the outer support across threads;
// pontryagin_serial is the reference it is tested against.
Cycle pontryagin(const Cycle& a, const Cycle& b, const RingContext& ctx);
Cycle pontryagin_serial(const Cycle& a, const Cycle& b, const RingContext& ctx);

Cycle star_power(const Cycle& c, unsigned k, const RingContext& ctx);
Cycle pushforward(const Cycle& c, const Integer& n);
Rational degree(const Cycle& c);

// Series in u = c - {0} through u^{*(g+1)}.
Cycle log_cycle(const Cycle& c, const RingContext& ctx);
Cycle exp_cycle(const Cycle& c, const RingContext& ctx);

// Sum_{j=1}^{g+1} (1/j) ({0} - {x})^{*j}, i.e. exactly -log_cycle({x}).
Cycle gamma(const GroupPoint& x, const RingContext& ctx);

// w with gamma(x) = -(({x} - {0}) * w) exactly; w = Sum_{j=0}^{g} (-u)^{*j}/(j+1).
Cycle gamma_factorization(const GroupPoint& x, const RingContext& ctx);

// True iff c lies in I^m, I the augmentation ideal of Q[Z^r]. Decided by the
// vanishing of every moment Sum_p c_p p^alpha with |alpha| < m.
bool in_augmentation_power(const Cycle& c, unsigned m);

// a - b in I^m: equality in the model where I^m = 0.
bool equal_modulo_augmentation_power(const Cycle& a, const Cycle& b, unsigned m);

}  // namespace zcycles
