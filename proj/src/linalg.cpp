#include "zcycles/linalg.hpp"

#include "zcycles/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace zcycles::linalg {

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols)
{
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw DimensionMismatch("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                    " entries, expected " + std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = rows[r][c];
    }
    return m;
}

Vector Matrix::row(std::size_t r) const
{
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Matrix Matrix::transposed() const
{
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

Rational dot(const Vector& a, const Vector& b)
{
    if (a.size() != b.size())
        throw DimensionMismatch("dot product of vectors of length " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

bool is_zero(const Vector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

namespace {

// Integer matrix with each rational row scaled by the lcm of its denominators.
struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Integer> a;

    Integer& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const Integer& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    void swap_rows(std::size_t r1, std::size_t r2)
    {
        if (r1 == r2)
            return;
        for (std::size_t c = 0; c < cols; ++c)
            std::swap(at(r1, c), at(r2, c));
    }
};

IntMatrix clear_denominators(const Matrix& m, const Vector* rhs = nullptr)
{
    IntMatrix im;
    im.rows = m.rows();
    im.cols = m.cols() + (rhs ? 1 : 0);
    im.a.resize(im.rows * im.cols);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Integer l = 1;
        for (std::size_t c = 0; c < m.cols(); ++c)
            l = lcm(l, m(r, c).get_den());
        if (rhs)
            l = lcm(l, (*rhs)[r].get_den());
        for (std::size_t c = 0; c < m.cols(); ++c)
            im.at(r, c) = m(r, c).get_num() * (l / m(r, c).get_den());
        if (rhs)
            im.at(r, m.cols()) = (*rhs)[r].get_num() * (l / (*rhs)[r].get_den());
    }
    return im;
}

struct Echelon {
    std::vector<std::size_t> pivot_cols;  // pivot_cols[i] is the pivot of row i
    int swaps = 0;
};

// One Bareiss step: eliminate column `pc` below row `pr` using pivot row pr.
void eliminate_below(IntMatrix& m, std::size_t pr, std::size_t pc, const Integer& prev, bool parallel)
{
    const std::ptrdiff_t first = static_cast<std::ptrdiff_t>(pr + 1);
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(m.rows);
    const Integer& pivot = m.at(pr, pc);
    auto update_row = [&](std::size_t i) {
        Integer factor = m.at(i, pc);
        Integer t;
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (c == pc)
                continue;
            t = pivot * m.at(i, c) - factor * m.at(pr, c);
            mpz_divexact(m.at(i, c).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        }
        m.at(i, pc) = 0;
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = first; i < last; ++i)
            update_row(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = first; i < last; ++i)
            update_row(static_cast<std::size_t>(i));
    }
}

Echelon bareiss(IntMatrix& m, const std::vector<std::size_t>& column_order, bool parallel)
{
    Echelon e;
    Integer prev = 1;
    std::size_t r = 0;
    const bool go_parallel = parallel && m.rows * m.cols >= 4096;
    for (std::size_t pc : column_order) {
        if (r == m.rows)
            break;
        std::size_t p = r;
        while (p < m.rows && sgn(m.at(p, pc)) == 0)
            ++p;
        if (p == m.rows)
            continue;
        if (p != r) {
            m.swap_rows(p, r);
            ++e.swaps;
        }
        eliminate_below(m, r, pc, prev, go_parallel);
        prev = m.at(r, pc);
        e.pivot_cols.push_back(pc);
        ++r;
    }
    return e;
}

std::vector<std::size_t> natural_order(std::size_t n)
{
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

std::vector<std::size_t> sparsest_first(const Matrix& m)
{
    std::vector<std::size_t> support(m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (sgn(m(r, c)) != 0)
                ++support[c];
    auto order = natural_order(m.cols());
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    return order;
}

}  // namespace

std::size_t rank(const Matrix& m)
{
    IntMatrix im = clear_denominators(m);
    return bareiss(im, natural_order(m.cols()), true).pivot_cols.size();
}

std::size_t rank_serial(const Matrix& m)
{
    IntMatrix im = clear_denominators(m);
    return bareiss(im, natural_order(m.cols()), false).pivot_cols.size();
}

Rational determinant(const Matrix& m)
{
    if (m.rows() != m.cols())
        throw DimensionMismatch("determinant of a non-square matrix");
    if (m.rows() == 0)
        return 1;
    // det(m) = det(scaled) / prod(row scales)
    Integer scale = 1;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Integer l = 1;
        for (std::size_t c = 0; c < m.cols(); ++c)
            l = lcm(l, m(r, c).get_den());
        scale *= l;
    }
    IntMatrix im = clear_denominators(m);
    Echelon e = bareiss(im, natural_order(m.cols()), false);
    if (e.pivot_cols.size() < m.rows())
        return 0;
    Rational d(im.at(m.rows() - 1, e.pivot_cols.back()), scale);
    d.canonicalize();
    return e.swaps % 2 == 0 ? d : Rational(-d);
}

std::optional<Vector> solve(const Matrix& m, const Vector& b)
{
    if (b.size() != m.rows())
        throw DimensionMismatch("right-hand side has " + std::to_string(b.size()) + " entries, matrix has " +
                                std::to_string(m.rows()) + " rows");
    IntMatrix im = clear_denominators(m, &b);
    const std::size_t rhs = m.cols();
    Echelon e = bareiss(im, sparsest_first(m), true);
    const std::size_t rk = e.pivot_cols.size();
    for (std::size_t r = rk; r < im.rows; ++r)
        if (sgn(im.at(r, rhs)) != 0)
            return std::nullopt;

    Vector x(m.cols(), Rational(0));
    for (std::size_t i = rk; i-- > 0;) {
        const std::size_t pc = e.pivot_cols[i];
        Rational acc(im.at(i, rhs));
        for (std::size_t j = i + 1; j < rk; ++j) {
            const std::size_t c = e.pivot_cols[j];
            if (sgn(im.at(i, c)) != 0)
                acc -= Rational(im.at(i, c)) * x[c];
        }
        x[pc] = acc / Rational(im.at(i, pc));
    }
    return x;
}

std::vector<Vector> nullspace(const Matrix& m)
{
    std::vector<std::size_t> pivots;
    Matrix red = reference::rref(m, &pivots);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots)
        is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        Vector v(m.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -red(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::size_t> independent_rows(const std::vector<Vector>& rows)
{
    // Incremental echelon: reduced[i] has its leading entry at lead[i].
    std::vector<Vector> reduced;
    std::vector<std::size_t> lead;
    std::vector<std::size_t> chosen;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Vector v = rows[r];
        for (std::size_t i = 0; i < reduced.size(); ++i) {
            if (sgn(v[lead[i]]) == 0)
                continue;
            Rational f = v[lead[i]] / reduced[i][lead[i]];
            for (std::size_t c = 0; c < v.size(); ++c)
                v[c] -= f * reduced[i][c];
        }
        auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return sgn(x) != 0; });
        if (it == v.end())
            continue;
        lead.push_back(static_cast<std::size_t>(it - v.begin()));
        reduced.push_back(std::move(v));
        chosen.push_back(r);
    }
    return chosen;
}

std::vector<Vector> row_space_basis(const std::vector<Vector>& rows, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    Matrix red = reference::rref(Matrix::from_rows(rows, cols), &pivots);
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < pivots.size(); ++i)
        basis.push_back(red.row(i));
    return basis;
}

namespace reference {

Matrix rref(const Matrix& m, std::vector<std::size_t>* pivots)
{
    Matrix a = m;
    std::size_t r = 0;
    std::vector<std::size_t> piv;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && sgn(a(p, c)) == 0)
            ++p;
        if (p == a.rows())
            continue;
        for (std::size_t j = 0; j < a.cols(); ++j)
            std::swap(a(p, j), a(r, j));
        const Rational inv = 1 / a(r, c);
        for (std::size_t j = 0; j < a.cols(); ++j)
            a(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || sgn(a(i, c)) == 0)
                continue;
            const Rational f = a(i, c);
            for (std::size_t j = 0; j < a.cols(); ++j)
                a(i, j) -= f * a(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    if (pivots)
        *pivots = std::move(piv);
    return a;
}

std::size_t rank(const Matrix& m)
{
    std::vector<std::size_t> piv;
    rref(m, &piv);
    return piv.size();
}

}  // namespace reference

}  // namespace zcycles::linalg
