#pragma once

// Alternating binomial kernels Sum_{i=0}^k (-1)^{k-i} C(k,i) i^d and the
// scalar by which the alternating sum of multiplication graphs acts on a
// holomorphic d-form (m_i^* eta = i^d eta).

#include "zcycles/rational.hpp"

#include <vector>

namespace zcycles {

struct KernelValue {
    unsigned k = 0;
    unsigned d = 0;
    Rational value;
};

// 0^0 = 1. Zero for 0 <= d < k, k! for d = k. Values for d > k are exact but
// carry no further contract.
Rational binomial_kernel(unsigned k, unsigned d);

// d-th derivative of (X-1)^k at X = 1, computed by expanding the polynomial
// and differentiating its coefficient vector; equals
// Sum_i (-1)^{k-i} C(k,i) i(i-1)...(i-d+1). Throws RangeError for d > k.
Rational derivative_oracle(unsigned k, unsigned d);

// Rebuilds binomial_kernel(k, d) from derivative_oracle(k, 0..d) through
// i^d = Sum_j S(d,j) i(i-1)...(i-j+1), S the Stirling numbers of the second
// kind. Requires d <= k.
Rational kernel_from_derivatives(unsigned k, unsigned d);

// Stirling numbers of the second kind S(d, j), 0 <= j <= d.
std::vector<Integer> stirling2_row(unsigned d);

// Lambda with (Gamma_k^Pont)^* eta = lambda eta for eta of degree d.
Rational pont_pullback_coefficient(unsigned k, unsigned d);

std::vector<KernelValue> kernel_table(unsigned kmax, unsigned dmax);

}  // namespace zcycles
