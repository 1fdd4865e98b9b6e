#pragma once

#include <cstdint>
#include <vector>

#include "lassopath/homotopy.hpp"

namespace lassopath {

// Complexity formulas are evaluated with every unspecified universal
// constant set to 1; values are meaningful as ratios and trends only.

/// n^1.1 · (d / (δσ))^6. DomainError unless all inputs are positive,
/// σ ≤ 1 and δ ≤ 1.
double theorem1_bound(double n, double d, double sigma, double delta);

/// 3^s · (√(sn)·d·(L_w/α² + L_u) / (δ²σγ_s))^(s/(s−1)). DomainError for
/// s < 2 or a nonpositive argument.
double theorem2_bound(double s, double n, double d, double lipschitz_w, double lipschitz_u, double alpha,
                      double sigma, double delta, double gamma_s);

/// High-probability lower-bound shape for γ_s: σ / (√(dn)·(d/δ)^(2/s)).
double gamma_s_reference(double n, double d, double sigma, double delta, double s);

struct GammaEstimate {
    double gamma_s = 0.0;
    std::size_t subsets_checked = 0;
    bool exhaustive = false;
};

/// min over size-s subsets S of min_v ‖X_{S̄} v − y‖₂. All subsets are
/// visited when C(d, s) ≤ 10⁴; otherwise `trials` subsets are sampled
/// uniformly with the counter RNG keyed by `seed`.
GammaEstimate estimate_gamma_s(const ProblemInstance& inst, std::size_t s, std::size_t trials, std::uint64_t seed);

struct SubsetBound {
    std::size_t s = 0;
    GammaEstimate gamma;
    double gamma_ratio = 0.0;   // γ_s / gamma_s_reference (NaN when undefined)
    double thm2_value = 0.0;    // NaN when undefined (s < 2, σ outside (0, 1])
    double count_ratio = 0.0;   // measured_count / thm2_value
};

struct BoundReport {
    std::size_t n = 0;
    std::size_t d = 0;
    double sigma = 0.0;
    double delta = 0.1;
    double alpha = 0.0;
    double beta = 0.0;
    double lipschitz_w = 0.0;
    double lipschitz_u = 0.0;
    double lw_limit = 0.0;  // √d/α²
    double lu_limit = 0.0;  // β²√d/α²
    bool lw_ok = false;
    bool lu_ok = false;
    std::size_t measured_count = 0;
    double thm1_value = 0.0;   // NaN when undefined
    double thm1_ratio = 0.0;   // measured_count / thm1_value
    double alpha_ratio = 0.0;  // α / (δσ/d)
    double max_kkt_violation = 0.0;
    std::vector<SubsetBound> subsets;

    bool deterministic_bounds_hold() const { return lw_ok && lu_ok; }
};

struct BoundOptions {
    PathOptions path;
    std::size_t gamma_trials = 2000;
    std::uint64_t seed = 0;
};

/// Traces the path and evaluates every quantity the complexity bounds
/// refer to. Only the deterministic Lipschitz inequalities are pass/fail.
BoundReport instance_bound_report(const ProblemInstance& inst, double delta, const std::vector<std::size_t>& s_list,
                                  const BoundOptions& opts = {});

}  // namespace lassopath
