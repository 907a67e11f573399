#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's arithmetic; cycles are plain maps from int vectors to mpq.

#include "zcycles/cycle.hpp"

#include <gmpxx.h>

#include <map>
#include <vector>

namespace oracle {

using Poly = std::map<std::vector<long>, mpq_class>;

inline mpq_class q(long p, long d = 1)
{
    mpq_class r(p, d);
    r.canonicalize();
    return r;
}

inline void add_term(Poly& p, const std::vector<long>& pt, const mpq_class& c)
{
    p[pt] += c;
    if (p[pt] == 0)
        p.erase(pt);
}

inline Poly mul(const Poly& a, const Poly& b)
{
    Poly r;
    for (const auto& [pa, ca] : a)
        for (const auto& [pb, cb] : b) {
            std::vector<long> s(pa.size());
            for (std::size_t i = 0; i < s.size(); ++i)
                s[i] = pa[i] + pb[i];
            add_term(r, s, ca * cb);
        }
    return r;
}

inline Poly pow(const Poly& a, unsigned k, std::size_t rank)
{
    Poly r{{std::vector<long>(rank, 0), mpq_class(1)}};
    for (unsigned i = 0; i < k; ++i)
        r = mul(r, a);
    return r;
}

inline Poly to_poly(const zcycles::Cycle& c)
{
    Poly p;
    for (const auto& [pt, coeff] : c.terms()) {
        std::vector<long> v;
        for (const auto& x : pt.coords())
            v.push_back(x.get_si());
        p[v] = coeff;
    }
    return p;
}

inline zcycles::Cycle to_cycle(std::size_t rank, const Poly& p)
{
    zcycles::Cycle c(rank);
    for (const auto& [pt, coeff] : p) {
        std::vector<zcycles::Integer> v;
        for (long x : pt)
            v.emplace_back(x);
        c.accumulate(zcycles::GroupPoint(std::move(v)), coeff);
    }
    return c;
}

inline long binom(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

inline long fact(int n)
{
    long long r = 1;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

// ({x}-{0})^k written out term by term: Sum (-1)^{k-i} C(k,i) {i x}.
inline Poly alternating_expansion(const std::vector<long>& x, unsigned k)
{
    Poly p;
    for (unsigned i = 0; i <= k; ++i) {
        std::vector<long> pt(x.size());
        for (std::size_t a = 0; a < x.size(); ++a)
            pt[a] = static_cast<long>(i) * x[a];
        add_term(p, pt, mpq_class(((k - i) % 2 ? -1 : 1) * binom(static_cast<int>(k), static_cast<int>(i))));
    }
    return p;
}

}  // namespace oracle
