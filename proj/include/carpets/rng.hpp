#pragma once

#include <cstdint>

namespace carpets {

/// Counter-based generator: the value at (seed, stream, index) is a pure
/// function of its arguments, so parallel consumers drawing from disjoint
/// streams or index ranges are reproducible regardless of scheduling.
/// SplitMix64 finalizer over a per-stream derived key.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

    std::uint64_t bits(std::uint64_t index) const noexcept {
        return mix(key_ + (index + 1) * 0x9e3779b97f4a7c15ull);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform(std::uint64_t index) const noexcept {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
};

} // namespace carpets
