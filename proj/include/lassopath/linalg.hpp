#pragma once

#include <span>

#include "lassopath/dense.hpp"

namespace lassopath {

/// min_v ‖X_sub v − y‖₂ by Householder QR. Numerically dependent columns
/// are skipped; an empty column set returns ‖y‖₂.
template <class T>
T least_squares_residual(const Matrix<T>& x_sub, std::span<const T> y);

template <class T>
struct SingularValueBounds {
    T alpha;  // smallest right singular value
    T beta;   // largest
};

/// One-sided (Hestenes) Jacobi SVD; needs rows >= cols. Relative accuracy
/// of the small singular values does not depend on cond(X)².
template <class T>
SingularValueBounds<T> extremal_singular_values(const Matrix<T>& x);

}  // namespace lassopath
