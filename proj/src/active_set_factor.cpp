#include "lassopath/active_set_factor.hpp"

#include <algorithm>
#include <string>

#include "lassopath/errors.hpp"

namespace lassopath {

template <class T>
T default_pivot_tol(const Matrix<T>& gram, double factor) {
    T max_diag(0);
    for (std::size_t i = 0; i < gram.rows(); ++i) max_diag = std::max(max_diag, gram(i, i));
    return T(factor) * scalar_traits<T>::epsilon() * max_diag;
}

template <class T>
ActiveSetFactor<T>::ActiveSetFactor(Matrix<T> gram)
    : ActiveSetFactor(gram, default_pivot_tol(gram)) {}

template <class T>
ActiveSetFactor<T>::ActiveSetFactor(Matrix<T> gram, T pivot_tol)
    : gram_(std::move(gram)), r_(gram_.rows(), gram_.rows()), pivot_tol_(pivot_tol) {
    active_.reserve(gram_.rows());
}

template <class T>
void ActiveSetFactor<T>::add(std::size_t j) {
    const std::size_t m = active_.size();
    if (j >= gram_.rows() || std::find(active_.begin(), active_.end(), j) != active_.end()) {
        throw SingularActiveSet("coordinate " + std::to_string(j) + " cannot join the active set");
    }
    // Border: solve Rᵀ r = G_{A,j}, pivot = G_jj − ‖r‖².
    Vector<T> col(m);
    for (std::size_t k = 0; k < m; ++k) {
        T s = gram_(active_[k], j);
        for (std::size_t l = 0; l < k; ++l) s -= r_(l, k) * col[l];
        col[k] = s / r_(k, k);
    }
    T pivot = gram_(j, j);
    for (std::size_t k = 0; k < m; ++k) pivot -= col[k] * col[k];
    if (!(pivot > pivot_tol_)) {
        throw SingularActiveSet("active set rank deficient when adding coordinate " + std::to_string(j));
    }
    for (std::size_t k = 0; k < m; ++k) r_(k, m) = col[k];
    r_(m, m) = sqrt(pivot);
    active_.push_back(j);
    note_update();
}

template <class T>
void ActiveSetFactor<T>::remove(std::size_t j) {
    auto it = std::find(active_.begin(), active_.end(), j);
    if (it == active_.end()) return;
    const std::size_t m = active_.size();
    const std::size_t pos = static_cast<std::size_t>(it - active_.begin());
    active_.erase(it);
    // Drop column pos, leaving an upper Hessenberg tail.
    for (std::size_t c = pos; c + 1 < m; ++c) {
        for (std::size_t i = 0; i <= c + 1; ++i) r_(i, c) = r_(i, c + 1);
    }
    for (std::size_t c = pos; c + 1 < m; ++c) {
        const T a = r_(c, c);
        const T b = r_(c + 1, c);
        const T h = sqrt(a * a + b * b);
        if (h == T(0)) continue;
        const T cs = a / h;
        const T sn = b / h;
        for (std::size_t k = c; k + 1 < m; ++k) {
            const T top = r_(c, k);
            const T bot = r_(c + 1, k);
            r_(c, k) = cs * top + sn * bot;
            r_(c + 1, k) = -sn * top + cs * bot;
        }
        r_(c + 1, c) = T(0);
    }
    for (std::size_t i = 0; i < m; ++i) r_(i, m - 1) = T(0);
    for (std::size_t k = 0; k < m; ++k) r_(m - 1, k) = T(0);
    note_update();
}

template <class T>
void ActiveSetFactor<T>::note_update() {
    if (++updates_ >= refactor_interval) refactorize();
}

template <class T>
void ActiveSetFactor<T>::refactorize() {
    const std::size_t m = active_.size();
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t i = 0; i < c; ++i) {
            T s = gram_(active_[i], active_[c]);
            for (std::size_t l = 0; l < i; ++l) s -= r_(l, i) * r_(l, c);
            r_(i, c) = s / r_(i, i);
        }
        T pivot = gram_(active_[c], active_[c]);
        for (std::size_t l = 0; l < c; ++l) pivot -= r_(l, c) * r_(l, c);
        if (!(pivot > pivot_tol_)) {
            throw SingularActiveSet("active set rank deficient at refactorization");
        }
        r_(c, c) = sqrt(pivot);
    }
    updates_ = 0;
}

template <class T>
Vector<T> ActiveSetFactor<T>::solve_once(std::span<const T> rhs) const {
    const std::size_t m = active_.size();
    Vector<T> z(rhs.begin(), rhs.end());
    // Rᵀ t = rhs
    for (std::size_t k = 0; k < m; ++k) {
        T s = z[k];
        for (std::size_t l = 0; l < k; ++l) s -= r_(l, k) * z[l];
        z[k] = s / r_(k, k);
    }
    // R z = t
    for (std::size_t k = m; k-- > 0;) {
        T s = z[k];
        for (std::size_t l = k + 1; l < m; ++l) s -= r_(k, l) * z[l];
        z[k] = s / r_(k, k);
    }
    return z;
}

template <class T>
Vector<T> ActiveSetFactor<T>::solve(std::span<const T> rhs) const {
    const std::size_t m = active_.size();
    Vector<T> z = solve_once(rhs);
    Vector<T> residual(m);
    for (std::size_t i = 0; i < m; ++i) {
        T s = rhs[i];
        for (std::size_t k = 0; k < m; ++k) s -= gram_(active_[i], active_[k]) * z[k];
        residual[i] = s;
    }
    const Vector<T> correction = solve_once(residual);
    for (std::size_t i = 0; i < m; ++i) z[i] += correction[i];
    return z;
}

template double default_pivot_tol(const Matrix<double>&, double);
template quad default_pivot_tol(const Matrix<quad>&, double);
template class ActiveSetFactor<double>;
template class ActiveSetFactor<quad>;

}  // namespace lassopath
