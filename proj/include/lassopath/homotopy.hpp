#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lassopath/errors.hpp"
#include "lassopath/instance.hpp"

namespace lassopath {

/// One maximal λ-interval with constant sign vector. On [lambda_lo,
/// lambda_hi] the active coordinates follow w_A(λ) = intercept + λ·slope.
struct PathSegment {
    Real lambda_hi;
    Real lambda_lo;
    std::vector<int> signs;            // length d, entries in {-1, 0, +1}
    std::vector<std::size_t> active;   // ascending coordinate order
    Vector<Real> intercept;            // indexed like `active`
    Vector<Real> slope;

    /// Midpoint used for verification; the unbounded zero segment uses 2·lambda_lo.
    Real probe_lambda() const;
    Vector<Real> evaluate(Real lambda, std::size_t d) const;
};

struct PathDiagnostics {
    PrecisionMode precision = PrecisionMode::Extended;
    double max_kkt_violation = 0.0;
    double kkt_tol = 0.0;
    bool kkt_ok = true;
    std::size_t tie_events = 0;
};

struct RegularizationPath {
    std::size_t d = 0;
    Real lambda_max = 0;
    Real lambda_min = 0;
    // Decreasing λ; segments[0] is the zero solution on [lambda_max, ∞).
    std::vector<PathSegment> segments;
    PathDiagnostics diagnostics;

    std::size_t count() const { return segments.size(); }
    /// λ values where the sign vector changes, strictly decreasing.
    std::vector<Real> breakpoints() const;
};

struct PathOptions {
    PrecisionMode precision = PrecisionMode::Extended;
    Real lambda_min = 0;
    std::size_t max_segments = 1'000'000;
    // Events within tie_factor·ε·λ of the leading event are applied together.
    double tie_factor = 100.0;
    // Active-set pivots must exceed pivot_factor·ε·max diag(XᵀX).
    double pivot_factor = 1e6;
    // Defaults to default_kkt_tol(precision).
    std::optional<double> kkt_tol;
    bool check_kkt = true;
};

double default_kkt_tol(PrecisionMode mode);

class SegmentBudgetExceeded : public LassoError {
public:
    SegmentBudgetExceeded(const std::string& what, RegularizationPath partial)
        : LassoError(what), partial_(std::move(partial)) {}
    const RegularizationPath& partial() const { return partial_; }

private:
    RegularizationPath partial_;
};

/// ‖Xᵀy‖∞: the smallest λ with w[λ] = 0.
Real lambda_max(const ProblemInstance& inst);

/// Event-driven homotopy from λ_max down to opts.lambda_min.
RegularizationPath solve_path(const ProblemInstance& inst, const PathOptions& opts = {});

struct KktReport {
    Vector<Real> u;          // Xᵀ(Xw − y)
    Vector<Real> violation;  // per coordinate
    Real max_violation = 0;
    bool pass = false;
};

/// Optimality residuals of w at λ. Active i (w_i ≠ 0): |u_i + λ·sign(w_i)|;
/// inactive i: max(0, |u_i| − λ). Evaluated in binary128.
KktReport kkt_check(const ProblemInstance& inst, Real lambda, std::span<const Real> w, Real tol);

/// w[λ] from a solved path. Zero for λ ≥ λ_max; OutOfRange below the
/// path's lambda_min or for λ ≤ 0.
Vector<Real> eval_path(const RegularizationPath& path, Real lambda);

struct PathSlopes {
    std::vector<Vector<Real>> dw;  // per segment, length d
    std::vector<Vector<Real>> du;  // per segment, length d
    Real lipschitz_w = 0;
    Real lipschitz_u = 0;
};

/// Per-segment dw/dλ = −(X_AᵀX_A)⁻¹s_A and du/dλ = XᵀX_A·(dw/dλ)_A.
/// Breakpoints themselves contribute nothing (derivative taken as 0 there).
PathSlopes path_slopes(const ProblemInstance& inst, const RegularizationPath& path);

}  // namespace lassopath
