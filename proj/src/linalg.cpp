#include "lassopath/linalg.hpp"

#include <algorithm>

namespace lassopath {

template <class T>
T least_squares_residual(const Matrix<T>& x_sub, std::span<const T> y) {
    const std::size_t n = x_sub.rows();
    Matrix<T> a = x_sub;
    Vector<T> r(y.begin(), y.end());
    const T eps = scalar_traits<T>::epsilon();
    std::size_t row = 0;
    for (std::size_t j = 0; j < a.cols() && row < n; ++j) {
        const T original = norm2<T>(x_sub.col(j));
        auto cj = a.col(j);
        T tail(0);
        for (std::size_t i = row; i < n; ++i) tail += cj[i] * cj[i];
        tail = sqrt(tail);
        if (tail <= T(100) * eps * original || tail == T(0)) continue;

        // Householder vector v stored in place of column j's tail.
        const T head = cj[row];
        const T alpha = head > T(0) ? -tail : tail;
        cj[row] = head - alpha;
        T vnorm2(0);
        for (std::size_t i = row; i < n; ++i) vnorm2 += cj[i] * cj[i];

        auto reflect = [&](std::span<T> target) {
            T s(0);
            for (std::size_t i = row; i < n; ++i) s += cj[i] * target[i];
            s = T(2) * s / vnorm2;
            for (std::size_t i = row; i < n; ++i) target[i] -= s * cj[i];
        };
        for (std::size_t k = j + 1; k < a.cols(); ++k) reflect(a.col(k));
        reflect(std::span<T>(r));
        ++row;
    }
    T res(0);
    for (std::size_t i = row; i < n; ++i) res += r[i] * r[i];
    return sqrt(res);
}

template <class T>
SingularValueBounds<T> extremal_singular_values(const Matrix<T>& x) {
    Matrix<T> u = x;
    const std::size_t n = u.rows();
    const std::size_t d = u.cols();
    const T eps = scalar_traits<T>::epsilon();
    for (int sweep = 0; sweep < 100; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                auto up = u.col(p);
                auto uq = u.col(q);
                const T a = dot<T>(up, up);
                const T b = dot<T>(uq, uq);
                const T g = dot<T>(up, uq);
                if (g == T(0) || abs(g) <= eps * sqrt(a * b)) continue;
                rotated = true;
                const T zeta = (b - a) / (T(2) * g);
                const T t = (zeta >= T(0) ? T(1) : T(-1)) / (abs(zeta) + sqrt(T(1) + zeta * zeta));
                const T c = T(1) / sqrt(T(1) + t * t);
                const T s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const T vp = up[i];
                    const T vq = uq[i];
                    up[i] = c * vp - s * vq;
                    uq[i] = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }
    SingularValueBounds<T> out{scalar_traits<T>::infinity(), T(0)};
    for (std::size_t j = 0; j < d; ++j) {
        const T sv = norm2<T>(u.col(j));
        out.alpha = std::min(out.alpha, sv);
        out.beta = std::max(out.beta, sv);
    }
    if (d == 0) out.alpha = T(0);
    return out;
}

template double least_squares_residual(const Matrix<double>&, std::span<const double>);
template quad least_squares_residual(const Matrix<quad>&, std::span<const quad>);
template SingularValueBounds<double> extremal_singular_values(const Matrix<double>&);
template SingularValueBounds<quad> extremal_singular_values(const Matrix<quad>&);

}  // namespace lassopath
