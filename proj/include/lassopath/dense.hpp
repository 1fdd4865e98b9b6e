#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

#include "lassopath/scalar.hpp"

namespace lassopath {

template <class T>
using Vector = std::vector<T>;

/// Dense column-major matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[j * rows_ + i];
    }
    const T& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[j * rows_ + i];
    }

    std::span<T> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const T> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    std::span<const T> data() const { return data_; }
    std::span<T> data() { return data_; }

    template <class U>
    Matrix<U> cast() const {
        Matrix<U> out(rows_, cols_);
        auto dst = out.data();
        for (std::size_t k = 0; k < data_.size(); ++k) dst[k] = static_cast<U>(data_[k]);
        return out;
    }

    /// Columns `idx` in the given order.
    Matrix select_cols(std::span<const std::size_t> idx) const {
        Matrix out(rows_, idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            auto src = col(idx[k]);
            auto dst = out.col(k);
            for (std::size_t i = 0; i < rows_; ++i) dst[i] = src[i];
        }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
    assert(a.size() == b.size());
    T s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class T>
T norm2(std::span<const T> a) {
    return sqrt(dot(a, a));
}

template <class T>
T norm_inf(std::span<const T> a) {
    T m(0);
    for (const T& v : a) m = abs(v) > m ? abs(v) : m;
    return m;
}

template <class U, class T>
Vector<U> cast_vector(std::span<const T> v) {
    Vector<U> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<U>(v[i]);
    return out;
}

/// y = A x
template <class T>
Vector<T> multiply(const Matrix<T>& a, std::span<const T> x) {
    assert(a.cols() == x.size());
    Vector<T> y(a.rows(), T(0));
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const T xj = x[j];
        if (xj == T(0)) continue;
        auto cj = a.col(j);
        for (std::size_t i = 0; i < a.rows(); ++i) y[i] += cj[i] * xj;
    }
    return y;
}

/// y = Aᵀ x
template <class T>
Vector<T> multiply_transposed(const Matrix<T>& a, std::span<const T> x) {
    assert(a.rows() == x.size());
    Vector<T> y(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] = dot<T>(a.col(j), x);
    return y;
}

/// AᵀA
template <class T>
Matrix<T> gram(const Matrix<T>& a) {
    const std::size_t d = a.cols();
    Matrix<T> g(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k <= j; ++k) {
            const T v = dot<T>(a.col(j), a.col(k));
            g(j, k) = v;
            g(k, j) = v;
        }
    }
    return g;
}

}  // namespace lassopath
