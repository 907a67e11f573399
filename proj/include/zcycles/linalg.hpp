#pragma once

// Exact linear algebra over Q.
//
// The working routines clear denominators row by row and run fraction-free
// (Bareiss) elimination on integers; the row updates of each pivot step are
// an OpenMP kernel. The `reference` namespace holds plain rational
// Gauss-Jordan versions that the tests compare against.

#include "zcycles/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace zcycles::linalg {

using Vector = std::vector<Rational>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    // All rows must have `cols` entries.
    static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Vector row(std::size_t r) const;
    Matrix transposed() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

std::size_t rank(const Matrix& m);
Rational determinant(const Matrix& m);

// Some x with m x = b, free variables set to zero; nullopt if inconsistent.
// Pivot columns are tried in order of increasing support.
std::optional<Vector> solve(const Matrix& m, const Vector& b);

// Basis of {x : m x = 0}, one vector per free column, in RREF normal form.
std::vector<Vector> nullspace(const Matrix& m);

// Indices of a greedy maximal linearly independent subset, scanning in order.
std::vector<std::size_t> independent_rows(const std::vector<Vector>& rows);

// Reduced row echelon basis of the row space (canonical for the subspace).
std::vector<Vector> row_space_basis(const std::vector<Vector>& rows, std::size_t cols);

Rational dot(const Vector& a, const Vector& b);
bool is_zero(const Vector& v);

// Serial Bareiss, used to validate the OpenMP kernel.
std::size_t rank_serial(const Matrix& m);

namespace reference {

std::size_t rank(const Matrix& m);
Matrix rref(const Matrix& m, std::vector<std::size_t>* pivots = nullptr);

}  // namespace reference

}  // namespace zcycles::linalg
