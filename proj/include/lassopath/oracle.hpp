#pragma once

#include <cstddef>

#include "lassopath/homotopy.hpp"

namespace lassopath {

struct OracleOptions {
    PrecisionMode precision = PrecisionMode::Extended;
    // Tiling tolerance as a fraction of λ_max.
    double gap_tol_rel = 1e-9;
    // 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
};

/**
 * Brute-force path: for every s ∈ {−1,0,+1}^d solve the KKT system on its
 * support and keep the λ-interval on which the pattern is both
 * sign-consistent and dual feasible. Since a sign vector determines its
 * segment, the surviving intervals are the path. Independent of the
 * homotopy code (own Gram products and Gaussian elimination).
 *
 * Throws TilingViolation when the intervals do not tile (0, ∞) to within
 * gap_tol_rel·λ_max, DomainError for d > 14.
 */
RegularizationPath enumerate_sign_patterns(const ProblemInstance& inst, const OracleOptions& opts = {});

/// Cyclic coordinate descent with exact soft-threshold updates, iterated
/// until kkt_check reports max violation ≤ tol. NoConvergence otherwise.
Vector<Real> grid_solve(const ProblemInstance& inst, Real lambda, double tol = 1e-12,
                        std::size_t max_iter = 1'000'000);

struct PathComparison {
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    bool same_signs = false;
    double max_breakpoint_rel_diff = 0.0;

    bool matches(double rel_tol) const {
        return same_signs && count_a == count_b && max_breakpoint_rel_diff <= rel_tol;
    }
};

/// Sign sequences and breakpoints (relative difference) of two paths.
PathComparison compare_paths(const RegularizationPath& a, const RegularizationPath& b);

}  // namespace lassopath
