#include "zcycles/identities.hpp"

#include "zcycles/errors.hpp"

#include <string>

namespace zcycles {

Rational binomial_kernel(unsigned k, unsigned d)
{
    if (k == 0)
        throw RangeError("binomial_kernel needs k >= 1");
    Integer sum = 0;
    for (unsigned i = 0; i <= k; ++i) {
        Integer power;
        mpz_ui_pow_ui(power.get_mpz_t(), i, d);  // 0^0 = 1
        Integer term = binomial(k, i) * power;
        if ((k - i) % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    return Rational(sum);
}

Rational derivative_oracle(unsigned k, unsigned d)
{
    if (k == 0)
        throw RangeError("derivative_oracle needs k >= 1");
    if (d > k)
        throw RangeError("derivative_oracle needs d <= k, got d=" + std::to_string(d) + " k=" + std::to_string(k));
    // (X-1)^k by repeated multiplication; coeffs[i] is the X^i coefficient.
    std::vector<Integer> coeffs{1};
    for (unsigned step = 0; step < k; ++step) {
        std::vector<Integer> next(coeffs.size() + 1, Integer(0));
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i + 1] += coeffs[i];
            next[i] -= coeffs[i];
        }
        coeffs = std::move(next);
    }
    for (unsigned step = 0; step < d; ++step) {
        std::vector<Integer> next(coeffs.size() > 1 ? coeffs.size() - 1 : 1, Integer(0));
        for (std::size_t i = 1; i < coeffs.size(); ++i)
            next[i - 1] = coeffs[i] * static_cast<unsigned long>(i);
        coeffs = std::move(next);
    }
    Integer at_one = 0;
    for (const auto& c : coeffs)
        at_one += c;
    return Rational(at_one);
}

std::vector<Integer> stirling2_row(unsigned d)
{
    // S(n, j) = j S(n-1, j) + S(n-1, j-1)
    std::vector<Integer> row{1};
    for (unsigned n = 1; n <= d; ++n) {
        std::vector<Integer> next(n + 1, Integer(0));
        for (unsigned j = 1; j <= n; ++j) {
            if (j < row.size())
                next[j] += row[j] * static_cast<unsigned long>(j);
            next[j] += row[j - 1];
        }
        row = std::move(next);
    }
    return row;
}

Rational kernel_from_derivatives(unsigned k, unsigned d)
{
    if (d > k)
        throw RangeError("kernel_from_derivatives needs d <= k");
    const auto s = stirling2_row(d);
    Rational sum = 0;
    for (unsigned j = 0; j <= d; ++j)
        if (sgn(s[j]) != 0)
            sum += Rational(s[j]) * derivative_oracle(k, j);
    return sum;
}

Rational pont_pullback_coefficient(unsigned k, unsigned d)
{
    if (k == 0 || d == 0)
        throw RangeError("pont_pullback_coefficient needs k, d >= 1");
    return binomial_kernel(k, d);
}

std::vector<KernelValue> kernel_table(unsigned kmax, unsigned dmax)
{
    std::vector<KernelValue> table;
    for (unsigned k = 1; k <= kmax; ++k)
        for (unsigned d = 0; d <= dmax; ++d)
            table.push_back({k, d, binomial_kernel(k, d)});
    return table;
}

}  // namespace zcycles
