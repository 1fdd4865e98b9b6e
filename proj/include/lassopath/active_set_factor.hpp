#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lassopath/dense.hpp"

namespace lassopath {

/**
 * Cholesky factor R (upper, RᵀR = G_AA) of the Gram matrix restricted to an
 * ordered active set. Columns are added by bordering and removed with a
 * Givens sweep; every `refactor_interval` updates the factor is rebuilt from
 * the Gram matrix to bound drift on long paths.
 *
 * A pivot is the squared diagonal entry produced while bordering. Pivots at
 * or below `pivot_tol` (default 1e6·ε·max diag G) raise SingularActiveSet.
 */
template <class T>
class ActiveSetFactor {
public:
    static constexpr std::size_t refactor_interval = 50;

    explicit ActiveSetFactor(Matrix<T> gram);
    ActiveSetFactor(Matrix<T> gram, T pivot_tol);

    std::span<const std::size_t> active() const { return active_; }
    std::size_t size() const { return active_.size(); }
    T pivot_tol() const { return pivot_tol_; }
    const Matrix<T>& gram() const { return gram_; }

    void add(std::size_t j);
    void remove(std::size_t j);
    void refactorize();

    /// Solves G_AA z = rhs (rhs indexed in active order) with one step of
    /// iterative refinement.
    Vector<T> solve(std::span<const T> rhs) const;

private:
    Vector<T> solve_once(std::span<const T> rhs) const;
    void note_update();

    Matrix<T> gram_;
    Matrix<T> r_;
    std::vector<std::size_t> active_;
    std::size_t updates_ = 0;
    T pivot_tol_;
};

extern template class ActiveSetFactor<double>;
extern template class ActiveSetFactor<quad>;

/// factor·ε·max diag(G); the default factor 1e6 makes the rank test scale invariant.
template <class T>
T default_pivot_tol(const Matrix<T>& gram, double factor = 1e6);

}  // namespace lassopath
