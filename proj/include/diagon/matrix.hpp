#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace diagon {

using Vector = std::vector<Rational>;

// Dense row-major matrix of exact rationals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix diagonal(std::span<const Rational> d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix&) const = default;

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (v != 0) return false;
        return true;
    }

    bool is_integer() const {
        for (const auto& v : data_)
            if (!diagon::is_integer(v)) return false;
        return true;
    }

    bool is_identity() const { return is_square() && *this == identity(rows_); }

    // Leading principal submatrix of order n.
    Matrix leading(std::size_t n) const {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    Vector column(std::size_t j) const {
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    void swap_cols(std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("matrix product dimension mismatch");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t l = 0; l < a.cols_; ++l) {
                const Rational& ail = a(i, l);
                if (ail == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += ail * b(l, j);
            }
        return r;
    }

    friend Vector operator*(const Matrix& a, std::span<const Rational> x) {
        if (a.cols_ != x.size()) throw DimensionError("matrix-vector dimension mismatch");
        Vector r(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) r[i] += a(i, j) * x[j];
        return r;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

// Gaussian elimination over Q.
inline Rational determinant(Matrix m) {
    if (!m.is_square()) throw DimensionError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m(pivot, col) == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != col) {
            m.swap_rows(pivot, col);
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m(i, col) == 0) continue;
            const Rational f = m(i, col) / m(col, col);
            for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

inline std::size_t rank(Matrix m) {
    std::size_t r = 0;
    for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
        std::size_t pivot = r;
        while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
        if (pivot == m.rows()) continue;
        m.swap_rows(pivot, r);
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (m(i, col) == 0) continue;
            const Rational f = m(i, col) / m(r, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

// Gauss-Jordan; throws DomainError on a singular matrix.
inline Matrix inverse(const Matrix& a) {
    if (!a.is_square()) throw DimensionError("inverse of a non-square matrix");
    const std::size_t n = a.rows();
    Matrix m = a;
    Matrix inv = Matrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m(pivot, col) == 0) ++pivot;
        if (pivot == n) throw DomainError("singular matrix");
        m.swap_rows(pivot, col);
        inv.swap_rows(pivot, col);
        const Rational p = m(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || m(i, col) == 0) continue;
            const Rational f = m(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= f * m(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

// Exact rational symmetric matrix of a quadratic form.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t k) : m_(k, k) {}
    explicit SymmetricMatrix(Matrix m) : m_(std::move(m)) {
        if (!m_.is_square()) throw DimensionError("symmetric matrix must be square");
        for (std::size_t i = 0; i < m_.rows(); ++i)
            for (std::size_t j = i + 1; j < m_.cols(); ++j)
                if (m_(i, j) != m_(j, i)) throw DomainError("matrix is not symmetric");
    }
    SymmetricMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
        : SymmetricMatrix(Matrix(rows)) {}

    std::size_t size() const { return m_.rows(); }
    const Rational& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    void set(std::size_t i, std::size_t j, const Rational& v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    const Matrix& matrix() const { return m_; }
    bool operator==(const SymmetricMatrix&) const = default;

private:
    Matrix m_;
};

} // namespace diagon
