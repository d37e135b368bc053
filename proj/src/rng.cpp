#include "randbench/rng.hpp"

#include "randbench/errors.hpp"
#include "randbench/natural.hpp"

namespace randbench {

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("uniform_below: bound must be positive");
    const std::uint64_t threshold = detail::rejection_threshold(bound);
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

Natural random_bits(Rng& rng, std::size_t bits) {
    // Draws are consumed as little-endian 64-bit words; the top word is masked.
    Natural result;
    std::size_t words = (bits + 63) / 64;
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t draw = rng.next_u64();
        std::size_t remaining = bits - w * 64;
        if (remaining < 64) draw &= (std::uint64_t{1} << remaining) - 1;
        result += Natural(draw) << (w * 64);
    }
    return result;
}

Natural uniform_natural_below(Rng& rng, const Natural& bound) {
    if (bound.is_zero()) throw InvalidArgument("uniform_natural_below: bound must be positive");
    if (auto small = bound.to_u64()) return Natural(rng.uniform_below(*small));
    const std::size_t bits = (bound - Natural(1)).bit_length();
    for (;;) {
        Natural candidate = random_bits(rng, bits);
        if (candidate < bound) return candidate;
    }
}

Natural uniform_natural_in(Rng& rng, const Natural& lo, const Natural& hi) {
    if (hi <= lo + Natural(1)) throw InvalidArgument("uniform_natural_in: interval (lo, hi) is empty");
    const Natural width = hi - lo;
    const std::size_t bits = width.bit_length();
    for (;;) {
        Natural offset = random_bits(rng, bits);
        if (!offset.is_zero() && offset < width) return lo + offset;
    }
}

}  // namespace randbench
