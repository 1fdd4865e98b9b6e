#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lassopath/dense.hpp"

namespace lassopath {

enum class VarianceMode {
    PerEntry,  // N(0, σ²) per entry
    Scaled,    // N(0, σ²/n) per entry
};

std::string_view to_string(VarianceMode mode);
VarianceMode parse_variance_mode(std::string_view name);

struct InstanceMeta {
    std::string generator = "manual";
    std::uint64_t seed = 0;
    double sigma = 0.0;
    std::optional<VarianceMode> variance_mode;
    std::uint64_t trial_index = 0;
    bool normalized = false;
    // Product of all factors applied to y by normalize().
    double scale = 1.0;

    friend bool operator==(const InstanceMeta&, const InstanceMeta&) = default;
};

/// Lasso problem min_w ½‖Xw − y‖² + λ‖w‖₁ with X (n×d), n ≥ d.
struct ProblemInstance {
    Matrix<Real> x;
    Vector<Real> y;
    InstanceMeta meta;

    std::size_t n() const { return x.rows(); }
    std::size_t d() const { return x.cols(); }

    /// Throws DomainError unless n ≥ d ≥ 1 and y has n entries.
    void validate() const;

    static ProblemInstance from_double(const Matrix<double>& x, std::span<const double> y);

    friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

}  // namespace lassopath
