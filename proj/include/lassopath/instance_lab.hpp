#pragma once

#include <cstdint>

#include "lassopath/instance.hpp"

namespace lassopath {

struct SmoothingSpec {
    double sigma = 0.0;
    VarianceMode variance_mode = VarianceMode::PerEntry;
    std::uint64_t seed = 0;
    std::uint32_t trial_index = 0;
};

/// (3^d + 1) / 2
std::uint64_t adversarial_segment_count(std::size_t d);

/**
 * Appends one row and one column to an instance:
 *
 *     X' = [ X   2αy      ]     y' = [ y       ]
 *          [ 0   α·y_next ]          [ y_next  ]
 *
 * When α(2‖y‖² + y_next²) is below the smallest breakpoint of the base
 * path, the new path has 3k − 1 segments where the old one had k: the new
 * coordinate enters after the old path is complete, the old path is then
 * retraced backwards to zero and forwards again with flipped signs.
 */
ProblemInstance add_dimension(const ProblemInstance& base, Real y_next, Real alpha);

struct AdversarialOptions {
    // α is this fraction of its admissible upper bound at every level.
    double alpha_fraction = 0.99;
    bool verify = true;
    // Smallest singular value decays ~40x per dimension (~1e-15 at d = 12),
    // below the default rank test; the construction is full rank by design.
    double pivot_factor = 1.0;
};

/// d×d worst-case instance with y = 1 and largest entry 1, built by
/// repeated add_dimension from the 1×1 instance X = (1). With `verify`
/// the exact path is traced at `precision` and ConstructionUnverified is
/// raised unless it has (3^d + 1)/2 segments.
ProblemInstance gen_adversarial(std::size_t d, PrecisionMode precision = PrecisionMode::Extended,
                                const AdversarialOptions& opts = {});

/// X' = X + G, G i.i.d. normal with variance σ² (PerEntry) or σ²/n (Scaled).
/// Entry (i, j) uses counter (seed, trial_index, j·n + i).
ProblemInstance smooth(const ProblemInstance& inst, const SmoothingSpec& spec);

/// X entries N(0, 1/n); y uniform on the unit sphere.
ProblemInstance gen_gaussian(std::size_t n, std::size_t d, std::uint64_t seed);

/// Rescales y to unit norm and records the factor in meta.scale.
ProblemInstance normalize(const ProblemInstance& inst);

}  // namespace lassopath
