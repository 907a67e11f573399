#include "zcycles/cycle.hpp"

#include <omp.h>

#include <algorithm>
#include <string>

namespace zcycles {

GroupPoint::GroupPoint(std::initializer_list<long> coords)
{
    coords_.reserve(coords.size());
    for (long c : coords)
        coords_.emplace_back(c);
}

GroupPoint GroupPoint::origin(std::size_t rank)
{
    return GroupPoint(std::vector<Integer>(rank, Integer(0)));
}

GroupPoint GroupPoint::generator(std::size_t rank, std::size_t index)
{
    if (index >= rank)
        throw RangeError("generator index " + std::to_string(index) + " out of rank " + std::to_string(rank));
    std::vector<Integer> c(rank, Integer(0));
    c[index] = 1;
    return GroupPoint(std::move(c));
}

bool GroupPoint::is_origin() const
{
    return std::all_of(coords_.begin(), coords_.end(), [](const Integer& c) { return sgn(c) == 0; });
}

Integer GroupPoint::height() const
{
    Integer h = 0;
    for (const auto& c : coords_)
        h += abs(c);
    return h;
}

GroupPoint GroupPoint::operator+(const GroupPoint& other) const
{
    if (rank() != other.rank())
        throw DimensionMismatch("adding points of rank " + std::to_string(rank()) + " and " +
                                std::to_string(other.rank()));
    std::vector<Integer> c(coords_.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = coords_[i] + other.coords_[i];
    return GroupPoint(std::move(c));
}

GroupPoint GroupPoint::operator-() const
{
    std::vector<Integer> c(coords_.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = -coords_[i];
    return GroupPoint(std::move(c));
}

GroupPoint GroupPoint::scaled(const Integer& n) const
{
    std::vector<Integer> c(coords_.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = coords_[i] * n;
    return GroupPoint(std::move(c));
}

bool operator<(const GroupPoint& a, const GroupPoint& b)
{
    const std::size_t n = std::min(a.rank(), b.rank());
    for (std::size_t i = 0; i < n; ++i) {
        int s = cmp(a.coords_[i], b.coords_[i]);
        if (s != 0)
            return s < 0;
    }
    return a.rank() < b.rank();
}

// ---------------------------------------------------------------------------

Cycle::Cycle(std::size_t rank, const std::vector<std::pair<GroupPoint, Rational>>& terms) : rank_(rank)
{
    for (const auto& [p, c] : terms)
        accumulate(p, c);
}

Cycle Cycle::unit(std::size_t rank)
{
    return point(GroupPoint::origin(rank));
}

Cycle Cycle::point(const GroupPoint& p, const Rational& coeff)
{
    Cycle c(p.rank());
    c.accumulate(p, coeff);
    return c;
}

Rational Cycle::coeff(const GroupPoint& p) const
{
    auto it = terms_.find(p);
    return it == terms_.end() ? Rational(0) : it->second;
}

Integer Cycle::max_height() const
{
    Integer h = 0;
    for (const auto& [p, _] : terms_)
        h = std::max(h, p.height());
    return h;
}

void Cycle::accumulate(const GroupPoint& p, const Rational& coeff)
{
    if (p.rank() != rank_)
        throw DimensionMismatch("point of rank " + std::to_string(p.rank()) + " in a cycle of rank " +
                                std::to_string(rank_));
    if (sgn(coeff) == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(p, coeff);
    if (!inserted) {
        it->second += coeff;
        if (sgn(it->second) == 0)
            terms_.erase(it);
    }
}

Cycle Cycle::operator+(const Cycle& other) const
{
    if (rank_ != other.rank_)
        throw DimensionMismatch("adding cycles of different rank");
    Cycle r = *this;
    for (const auto& [p, c] : other.terms_)
        r.accumulate(p, c);
    return r;
}

Cycle Cycle::operator-(const Cycle& other) const
{
    return *this + (-other);
}

Cycle Cycle::operator-() const
{
    Cycle r = *this;
    for (auto& [_, c] : r.terms_)
        c = -c;
    return r;
}

Cycle Cycle::operator*(const Rational& s) const
{
    if (sgn(s) == 0)
        return Cycle(rank_);
    Cycle r = *this;
    for (auto& [_, c] : r.terms_)
        c *= s;
    return r;
}

Cycle Cycle::operator/(const Rational& s) const
{
    if (sgn(s) == 0)
        throw std::domain_error("division of a cycle by zero");
    return *this * (1 / s);
}

// ---------------------------------------------------------------------------

RingContext::RingContext(std::size_t rank, unsigned geom_dim, std::uint64_t support_cap)
    : rank_(rank), geom_dim_(geom_dim), support_cap_(support_cap)
{
    if (rank == 0)
        throw RangeError("ring context needs rank >= 1");
    if (geom_dim == 0)
        throw RangeError("ring context needs geometric dimension g >= 1");
}

void RingContext::check_support(const Cycle& c, const char* what) const
{
    if (c.rank() != rank_)
        throw DimensionMismatch(std::string(what) + ": cycle rank " + std::to_string(c.rank()) +
                                " differs from context rank " + std::to_string(rank_));
    const Integer cap(static_cast<unsigned long>(support_cap_));
    for (const auto& [p, _] : c.terms())
        if (p.height() > cap)
            throw SupportCapExceeded(std::string(what) + ": point of height " + p.height().get_str() +
                                     " exceeds support cap " + std::to_string(support_cap_));
}

// ---------------------------------------------------------------------------

Cycle cycle_add(const Cycle& a, const Cycle& b)
{
    return a + b;
}

namespace {

using Accumulator = std::map<GroupPoint, Rational>;

void convolve_into(Accumulator& acc, const GroupPoint& p, const Rational& cp, const Cycle& b)
{
    for (const auto& [q, cq] : b.terms()) {
        auto [it, inserted] = acc.try_emplace(p + q, 0);
        it->second += cp * cq;
    }
}

// Every product point is a key of acc, including those whose coefficients
// cancelled, so the cap check sees all of them.
Cycle finish(std::size_t rank, Accumulator&& acc, const RingContext& ctx)
{
    const Integer cap(static_cast<unsigned long>(ctx.support_cap()));
    Cycle out(rank);
    for (auto& [p, c] : acc) {
        if (p.height() > cap)
            throw SupportCapExceeded("Pontryagin product reaches a point of height " + p.height().get_str() +
                                     " above support cap " + std::to_string(ctx.support_cap()));
        out.accumulate(p, c);
    }
    return out;
}

void check_inputs(const Cycle& a, const Cycle& b, const RingContext& ctx)
{
    ctx.check_support(a, "pontryagin lhs");
    ctx.check_support(b, "pontryagin rhs");
}

}  // namespace

Cycle pontryagin_serial(const Cycle& a, const Cycle& b, const RingContext& ctx)
{
    check_inputs(a, b, ctx);
    Accumulator acc;
    for (const auto& [p, cp] : a.terms())
        convolve_into(acc, p, cp, b);
    return finish(a.rank(), std::move(acc), ctx);
}

Cycle pontryagin(const Cycle& a, const Cycle& b, const RingContext& ctx)
{
    check_inputs(a, b, ctx);
    // The smaller factor goes outside; small products are not worth a team.
    const Cycle& outer = a.size() <= b.size() ? a : b;
    const Cycle& inner = a.size() <= b.size() ? b : a;
    if (outer.size() * inner.size() < 512)
        return pontryagin_serial(a, b, ctx);

    std::vector<const Cycle::Terms::value_type*> rows;
    rows.reserve(outer.size());
    for (const auto& t : outer.terms())
        rows.push_back(&t);

    std::vector<Accumulator> partial;
#pragma omp parallel
    {
        Accumulator local;
#pragma omp for schedule(dynamic, 4) nowait
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rows.size()); ++i)
            convolve_into(local, rows[i]->first, rows[i]->second, inner);
#pragma omp critical(zcycles_pontryagin_merge)
        partial.push_back(std::move(local));
    }

    Accumulator acc;
    for (auto& part : partial) {
        if (acc.empty()) {
            acc = std::move(part);
            continue;
        }
        for (auto& [p, c] : part) {
            auto [it, inserted] = acc.try_emplace(p, c);
            if (!inserted)
                it->second += c;
        }
    }
    return finish(a.rank(), std::move(acc), ctx);
}

Cycle star_power(const Cycle& c, unsigned k, const RingContext& ctx)
{
    ctx.check_support(c, "star_power");
    Cycle r = Cycle::unit(c.rank());
    for (unsigned i = 0; i < k; ++i)
        r = pontryagin(r, c, ctx);
    return r;
}

Cycle pushforward(const Cycle& c, const Integer& n)
{
    Cycle r(c.rank());
    for (const auto& [p, coeff] : c.terms())
        r.accumulate(p.scaled(n), coeff);
    return r;
}

Rational degree(const Cycle& c)
{
    Rational d = 0;
    for (const auto& [_, coeff] : c.terms())
        d += coeff;
    return d;
}

Cycle log_cycle(const Cycle& c, const RingContext& ctx)
{
    if (degree(c) != 1)
        throw DegreeError("log_cycle needs a cycle of degree 1, got " + to_fraction_string(degree(c)));
    const Cycle u = c - Cycle::unit(c.rank());
    Cycle sum(c.rank());
    Cycle power = Cycle::unit(c.rank());
    for (unsigned j = 1; j <= ctx.nilpotency_order(); ++j) {
        power = pontryagin(power, u, ctx);
        Rational coeff(j % 2 == 1 ? 1 : -1, j);
        coeff.canonicalize();
        sum = sum + power * coeff;
    }
    return sum;
}

Cycle exp_cycle(const Cycle& c, const RingContext& ctx)
{
    if (degree(c) != 0)
        throw DegreeError("exp_cycle needs a cycle of degree 0, got " + to_fraction_string(degree(c)));
    Cycle sum = Cycle::unit(c.rank());
    Cycle power = Cycle::unit(c.rank());
    Integer fact = 1;
    for (unsigned j = 1; j <= ctx.nilpotency_order(); ++j) {
        power = pontryagin(power, c, ctx);
        fact *= j;
        sum = sum + power / Rational(fact);
    }
    return sum;
}

Cycle gamma(const GroupPoint& x, const RingContext& ctx)
{
    const std::size_t r = x.rank();
    const Cycle v = Cycle::unit(r) - Cycle::point(x);
    Cycle sum(r);
    Cycle power = Cycle::unit(r);
    for (unsigned j = 1; j <= ctx.nilpotency_order(); ++j) {
        power = pontryagin(power, v, ctx);
        sum = sum + power / Rational(j);
    }
    return sum;
}

Cycle gamma_factorization(const GroupPoint& x, const RingContext& ctx)
{
    if (x.is_origin())
        throw PreconditionViolated("gamma_factorization needs x != 0_A");
    const std::size_t r = x.rank();
    const Cycle minus_u = Cycle::unit(r) - Cycle::point(x);
    Cycle w(r);
    Cycle power = Cycle::unit(r);
    for (unsigned j = 0; j < ctx.nilpotency_order(); ++j) {
        if (j > 0)
            power = pontryagin(power, minus_u, ctx);
        w = w + power / Rational(j + 1);
    }
    return w;
}

namespace {

// Calls f(alpha) for every multi-index of the given rank with |alpha| < m.
template <class F>
void for_each_multi_index_below(std::size_t rank, unsigned m, F&& f)
{
    if (m == 0)
        return;
    std::vector<unsigned> alpha(rank, 0);
    auto rec = [&](auto&& self, std::size_t pos, unsigned remaining) -> void {
        if (pos == rank) {
            f(alpha);
            return;
        }
        for (unsigned a = 0; a <= remaining; ++a) {
            alpha[pos] = a;
            self(self, pos + 1, remaining - a);
        }
        alpha[pos] = 0;
    };
    rec(rec, 0, m - 1);
}

}  // namespace

bool in_augmentation_power(const Cycle& c, unsigned m)
{
    if (m == 0 || c.empty())
        return true;
    const std::size_t r = c.rank();
    // powers[t][i][a] = p_i^a for the t-th term.
    std::vector<const Rational*> coeffs;
    std::vector<std::vector<std::vector<Integer>>> powers;
    for (const auto& [p, coeff] : c.terms()) {
        coeffs.push_back(&coeff);
        std::vector<std::vector<Integer>> pw(r, std::vector<Integer>(m));
        for (std::size_t i = 0; i < r; ++i) {
            pw[i][0] = 1;
            for (unsigned a = 1; a < m; ++a)
                pw[i][a] = pw[i][a - 1] * p[i];
        }
        powers.push_back(std::move(pw));
    }
    bool ok = true;
    for_each_multi_index_below(r, m, [&](const std::vector<unsigned>& alpha) {
        if (!ok)
            return;
        Rational moment = 0;
        for (std::size_t t = 0; t < coeffs.size(); ++t) {
            Integer mono = 1;
            for (std::size_t i = 0; i < r; ++i)
                mono *= powers[t][i][alpha[i]];
            moment += *coeffs[t] * mono;
        }
        ok = sgn(moment) == 0;
    });
    return ok;
}

bool equal_modulo_augmentation_power(const Cycle& a, const Cycle& b, unsigned m)
{
    return in_augmentation_power(a - b, m);
}

}  // namespace zcycles
