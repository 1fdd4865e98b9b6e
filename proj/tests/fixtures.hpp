#pragma once

#include <cstdint>
#include <vector>

#include "lassopath/dense.hpp"
#include "lassopath/rng.hpp"

namespace fixtures {

inline lassopath::Matrix<double> random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
    const lassopath::CounterRng rng(seed);
    lassopath::Matrix<double> x(n, d);
    for (std::size_t k = 0; k < n * d; ++k) x.data()[k] = rng.normal(lassopath::Stream::DesignEntries, 0, k);
    return x;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    const lassopath::CounterRng rng(seed);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal(lassopath::Stream::TargetEntries, 0, i);
    return v;
}

}  // namespace fixtures
