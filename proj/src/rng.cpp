#include "lassopath/rng.hpp"

#include <cmath>
#include <numbers>

namespace lassopath {

namespace {

Philox4x32::Block counter_for(Stream stream, std::uint32_t trial, std::uint64_t entry) {
    return {static_cast<std::uint32_t>(entry), static_cast<std::uint32_t>(entry >> 32), trial,
            static_cast<std::uint32_t>(stream)};
}

// 53 random bits mapped to the open interval (0, 1).
double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<double, 2> CounterRng::uniform2(Stream stream, std::uint32_t trial, std::uint64_t entry) const {
    const auto block = philox_(counter_for(stream, trial, entry));
    return {to_unit(block[0], block[1]), to_unit(block[2], block[3])};
}

double CounterRng::normal(Stream stream, std::uint32_t trial, std::uint64_t entry) const {
    const auto [u1, u2] = uniform2(stream, trial, entry);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::below(std::uint64_t bound, Stream stream, std::uint32_t trial,
                                std::uint64_t entry) const {
    const auto block = philox_(counter_for(stream, trial, entry));
    const std::uint64_t bits = (std::uint64_t{block[0]} << 32) | block[1];
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits) * bound) >> 64);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace lassopath
