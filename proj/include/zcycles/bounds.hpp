#pragma once

// Dimension thresholds of the gonality and orbit-countability theorems, and
// the induction/descent arithmetic behind them. Everything is exact.

#include "zcycles/rational.hpp"

#include <vector>

namespace zcycles {

struct ThresholdTable {
    unsigned k = 0;
    Integer g_gonality;           // 2^{k-2}(2k-1) + (2^{k-2}-1)(k-2)
    Integer g_orbit_all;          // 2^k(2k-1) + (2^k-1)(k-2)
    Integer g_orbit_weierstrass;  // same value as g_gonality
    Integer g_orbit_countable;    // 2k-1
    Integer g_conjectural;        // 2k-1, conjectured gonality bound, not proven
    std::vector<Integer> induction_G;  // G_0..G_k
};

// Throws RangeError for k < 2.
ThresholdTable thresholds(unsigned k);

// G_l = 2^l(2k-1) + (2^l-1)(k-2).
Integer induction_closed_form(unsigned k, unsigned l);

// G_0 = 2k-1, G_{l+1} = 2 G_l + (k-2), for l = 0..lmax (default lmax = k).
// Throws RangeError for k < 2.
std::vector<Integer> induction_sequence(unsigned k);
std::vector<Integer> induction_sequence(unsigned k, unsigned lmax);

struct DescentStep {
    Integer g;
    Integer dim;
};

struct DescentThresholds {
    Integer countable_at_i;    // 2 g0 - 1
    Integer countable_at_iii;  // g0 + k - 1
};

DescentThresholds descent_thresholds(const Integer& g0, const Integer& k);

// Worst-case dimension descent: dim at g0 is start_dim and drops by one per
// unit increase of g until it reaches zero. The last step has dim 0.
std::vector<DescentStep> descent_simulation(const Integer& g0, const Integer& start_dim);

// Largest k with g_gonality(k) <= g ("gonality >= k+1"); 1 when g < 3.
unsigned max_proven_gonality(const Integer& g);

}  // namespace zcycles
