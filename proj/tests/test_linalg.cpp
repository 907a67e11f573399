#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "zcycles/errors.hpp"
#include "zcycles/linalg.hpp"

#include <random>

using namespace zcycles;
using namespace zcycles::linalg;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int bound, int den = 1,
                     double density = 1.0)
{
    std::uniform_int_distribution<int> e(-bound, bound);
    std::uniform_int_distribution<int> d(1, den);
    std::bernoulli_distribution keep(density);
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (keep(rng))
                m(r, c) = oracle::q(e(rng), d(rng));
    return m;
}

Vector mul(const Matrix& m, const Vector& x)
{
    Vector y(m.rows(), Rational(0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            y[r] += m(r, c) * x[c];
    return y;
}

// Cofactor expansion along the first row.
Rational cofactor_det(const Matrix& m)
{
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    Rational total = 0;
    for (std::size_t c = 0; c < n; ++c) {
        Matrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t cc = 0, k = 0; cc < n; ++cc)
                if (cc != c)
                    minor(r - 1, k++) = m(r, cc);
        const Rational term = m(0, c) * cofactor_det(minor);
        total += c % 2 ? Rational(-term) : term;
    }
    return total;
}

}  // namespace

TEST_CASE("rank agrees with the rational reference")
{
    std::mt19937_64 rng(1);
    for (int t = 0; t < 60; ++t) {
        const std::size_t r = 1 + t % 7, c = 1 + (t * 3) % 8;
        auto m = random_matrix(r, c, rng, 2, 3, 0.6);
        CHECK(rank(m) == reference::rank(m));
        CHECK(rank_serial(m) == reference::rank(m));
        CHECK(rank(m.transposed()) == rank(m));
    }
    Matrix z(3, 4);
    CHECK(rank(z) == 0);
}

TEST_CASE("parallel Bareiss on matrices above the threshold")
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 3; ++t) {
        auto m = random_matrix(70, 70, rng, 3, 1, 0.3);
        // Force rank deficiency: last rows copy combinations of the first.
        for (std::size_t c = 0; c < 70; ++c) {
            m(68, c) = m(0, c) + m(1, c);
            m(69, c) = m(2, c) * 3;
        }
        const auto want = reference::rank(m);
        CHECK(rank(m) == want);
        CHECK(rank_serial(m) == want);
        CHECK(want <= 68);
    }
}

TEST_CASE("determinant against cofactor expansion")
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 1 + t % 5;
        auto m = random_matrix(n, n, rng, 4, 3, 0.8);
        CHECK(determinant(m) == cofactor_det(m));
    }
    Matrix swap(2, 2);
    swap(0, 1) = 1;
    swap(1, 0) = 1;
    CHECK(determinant(swap) == -1);
    CHECK(determinant(Matrix(0, 0)) == 1);
    CHECK_THROWS_AS(determinant(Matrix(2, 3)), DimensionMismatch);
}

TEST_CASE("solve")
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 40; ++t) {
        const std::size_t r = 2 + t % 5, c = 2 + (t * 7) % 6;
        auto m = random_matrix(r, c, rng, 3, 2, 0.7);
        Vector x0;
        for (std::size_t i = 0; i < c; ++i)
            x0.push_back(oracle::q(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)));
        const Vector b = mul(m, x0);
        auto x = solve(m, b);
        REQUIRE(x.has_value());
        CHECK(mul(m, *x) == b);
    }
    Matrix m(2, 1);
    m(0, 0) = 1;
    m(1, 0) = 1;
    CHECK_FALSE(solve(m, {Rational(1), Rational(2)}).has_value());
    CHECK_THROWS_AS(solve(m, {Rational(1)}), DimensionMismatch);
}

TEST_CASE("nullspace, independent rows, row space")
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        const std::size_t r = 1 + t % 5, c = 2 + t % 6;
        auto m = random_matrix(r, c, rng, 2, 1, 0.6);
        const auto ns = nullspace(m);
        CHECK(ns.size() + reference::rank(m) == c);
        for (const auto& v : ns)
            CHECK(is_zero(mul(m, v)));

        std::vector<Vector> rows;
        for (std::size_t i = 0; i < r; ++i)
            rows.push_back(m.row(i));
        rows.push_back(m.row(0));
        const auto idx = independent_rows(rows);
        CHECK(idx.size() == reference::rank(m));
        CHECK(row_space_basis(rows, c).size() == idx.size());
    }
    CHECK(dot({1, 2}, {3, 4}) == 11);
    CHECK_THROWS_AS(dot({1}, {1, 2}), DimensionMismatch);
    CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {1}}, 2), DimensionMismatch);
}
