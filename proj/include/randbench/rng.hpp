#pragma once

#include <cstdint>

namespace randbench {

class Natural;

/// SplitMix64 generator. The only source of randomness in the library; every
/// randomized routine takes one by reference and advances it.
class Rng {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    constexpr Rng() noexcept = default;
    constexpr explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next_u64() noexcept {
        state_ += kGolden;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound) by rejection; throws InvalidArgument for bound = 0.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t state() const noexcept { return state_; }

    friend constexpr bool operator==(const Rng&, const Rng&) = default;

private:
    std::uint64_t state_ = 0;
};

/// Independent-looking stream number `index` derived from `seed`.
constexpr Rng derive_stream(std::uint64_t seed, std::uint64_t index) noexcept {
    Rng mixer(seed ^ (index * Rng::kGolden));
    return Rng(mixer.next_u64());
}

namespace detail {

/// Smallest accepted raw draw for rejection sampling below `bound` over a
/// word of type UInt: draws in [threshold, 2^w) map evenly onto [0, bound).
template <typename UInt>
constexpr UInt rejection_threshold(UInt bound) noexcept {
    return static_cast<UInt>(static_cast<UInt>(0 - bound) % bound);
}

}  // namespace detail

/// Uniform natural in [0, bound); bound must be nonzero.
Natural uniform_natural_below(Rng& rng, const Natural& bound);

/// Uniform natural in the open interval (lo, hi); requires hi > lo + 1.
Natural uniform_natural_in(Rng& rng, const Natural& lo, const Natural& hi);

/// Natural with exactly `bits` uniformly random low bits.
Natural random_bits(Rng& rng, std::size_t bits);

}  // namespace randbench
