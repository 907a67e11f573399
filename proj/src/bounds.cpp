#include "zcycles/bounds.hpp"

#include "zcycles/errors.hpp"

namespace zcycles {

namespace {

Integer pow2(unsigned e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

void require_k(unsigned k)
{
    if (k < 2)
        throw RangeError("thresholds are stated for k >= 2");
}

}  // namespace

Integer induction_closed_form(unsigned k, unsigned l)
{
    require_k(k);
    const Integer p = pow2(l);
    return p * (2 * k - 1) + (p - 1) * (k - 2);
}

std::vector<Integer> induction_sequence(unsigned k, unsigned lmax)
{
    require_k(k);
    std::vector<Integer> g;
    g.reserve(lmax + 1);
    g.emplace_back(2 * k - 1);
    for (unsigned l = 0; l < lmax; ++l)
        g.push_back(2 * g.back() + (k - 2));
    return g;
}

std::vector<Integer> induction_sequence(unsigned k)
{
    return induction_sequence(k, k);
}

ThresholdTable thresholds(unsigned k)
{
    require_k(k);
    ThresholdTable t;
    t.k = k;
    t.g_gonality = induction_closed_form(k, k - 2);
    t.g_orbit_all = induction_closed_form(k, k);
    t.g_orbit_weierstrass = t.g_gonality;
    t.g_orbit_countable = 2 * k - 1;
    t.g_conjectural = 2 * k - 1;
    t.induction_G = induction_sequence(k);
    return t;
}

DescentThresholds descent_thresholds(const Integer& g0, const Integer& k)
{
    if (g0 < 1 || k < 1)
        throw RangeError("descent_thresholds needs g0 >= 1 and k >= 1");
    return {2 * g0 - 1, g0 + k - 1};
}

std::vector<DescentStep> descent_simulation(const Integer& g0, const Integer& start_dim)
{
    if (start_dim < 0)
        throw RangeError("descent_simulation needs a nonnegative starting dimension");
    std::vector<DescentStep> steps;
    Integer g = g0;
    Integer d = start_dim;
    steps.push_back({g, d});
    while (d > 0) {
        ++g;
        --d;
        steps.push_back({g, d});
    }
    return steps;
}

unsigned max_proven_gonality(const Integer& g)
{
    unsigned best = 1;
    for (unsigned k = 2;; ++k) {
        if (induction_closed_form(k, k - 2) > g)
            break;
        best = k;
    }
    return best;
}

}  // namespace zcycles
