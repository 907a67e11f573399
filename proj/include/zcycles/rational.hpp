#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace zcycles {

using Integer = mpz_class;
using Rational = mpq_class;

// "p/q" with q >= 1, always including the denominator.
std::string to_fraction_string(const Rational& q);

// Accepts "p", "p/q", with optional sign. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

Integer binomial(unsigned long n, unsigned long k);
Integer factorial(unsigned long n);

}  // namespace zcycles
