#pragma once

#include <array>
#include <cstdint>

namespace lassopath {

/// Philox4x32-10 counter-based generator. Every draw is a pure function of
/// (key, counter), so results do not depend on evaluation order or on how
/// trials are split across threads.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox4x32(std::uint64_t key) : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

    Block operator()(Block counter) const {
        std::array<std::uint32_t, 2> k = key_;
        for (int round = 0; round < 10; ++round) {
            counter = round_once(counter, k);
            k[0] += 0x9E3779B9u;
            k[1] += 0xBB67AE85u;
        }
        return counter;
    }

private:
    static Block round_once(const Block& c, const std::array<std::uint32_t, 2>& k) {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
        return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }

    std::array<std::uint32_t, 2> key_;
};

/// Named draw streams so that, e.g., X entries and y entries never share
/// counters.
enum class Stream : std::uint32_t {
    DesignEntries = 1,
    TargetEntries = 2,
    Smoothing = 3,
    SubsetSampling = 4,
    ImageSampling = 5,
    PatchSampling = 6,
};

/// Draws keyed by (seed, stream, trial_index, entry_index).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : philox_(seed) {}

    /// Two independent 53-bit uniforms in (0, 1).
    std::array<double, 2> uniform2(Stream stream, std::uint32_t trial, std::uint64_t entry) const;
    double uniform(Stream stream, std::uint32_t trial, std::uint64_t entry) const {
        return uniform2(stream, trial, entry)[0];
    }
    /// Standard normal via Box–Muller on one counter block.
    double normal(Stream stream, std::uint32_t trial, std::uint64_t entry) const;
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound, Stream stream, std::uint32_t trial, std::uint64_t entry) const;

private:
    Philox4x32 philox_;
};

/// SplitMix64 finalizer; used to derive per-cell seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace lassopath
