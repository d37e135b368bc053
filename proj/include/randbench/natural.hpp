#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace randbench {

/// Arbitrary-precision non-negative integer.
///
/// Stored as little-endian 32-bit limbs with no leading zero limbs, so zero is
/// the empty limb vector and equality is plain structural comparison.
/// Subtraction that would go negative throws InvalidArgument; use abs_diff
/// where the sign is not known in advance.
class Natural {
public:
    using Limb = std::uint32_t;
    static constexpr unsigned kLimbBits = 32;

    Natural() = default;
    Natural(std::uint64_t value);  // NOLINT(google-explicit-constructor): numeric literal convenience

    /// Accepts decimal digits, or hex with a `0x`/`0X` prefix. Underscores are ignored.
    static Natural parse(std::string_view text);
    static Natural from_decimal(std::string_view digits);
    static Natural from_hex(std::string_view digits);
    /// Big-endian byte interpretation; an empty span is zero.
    static Natural from_bytes_be(std::span<const std::uint8_t> bytes);
    static Natural power_of_two(std::size_t exponent);

    std::string to_decimal() const;
    /// Lowercase hex with `0x` prefix.
    std::string to_hex() const;
    std::vector<std::uint8_t> to_bytes_be() const;

    bool is_zero() const noexcept { return limbs_.empty(); }
    bool is_odd() const noexcept { return !limbs_.empty() && (limbs_[0] & 1U); }
    bool is_even() const noexcept { return !is_odd(); }
    bool is_one() const noexcept { return limbs_.size() == 1 && limbs_[0] == 1; }
    std::size_t bit_length() const noexcept;
    bool test_bit(std::size_t index) const noexcept;
    /// Number of trailing zero bits; zero has none by convention.
    std::size_t trailing_zeros() const noexcept;

    bool fits_u64() const noexcept { return limbs_.size() <= 2; }
    std::optional<std::uint64_t> to_u64() const noexcept;
    /// Low 64 bits, truncating.
    std::uint64_t low_u64() const noexcept;

    std::span<const Limb> limbs() const noexcept { return limbs_; }

    Natural& operator+=(const Natural& rhs);
    Natural& operator-=(const Natural& rhs);
    Natural& operator*=(const Natural& rhs);
    Natural& operator/=(const Natural& rhs);
    Natural& operator%=(const Natural& rhs);
    Natural& operator<<=(std::size_t bits);
    Natural& operator>>=(std::size_t bits);

    friend Natural operator+(Natural lhs, const Natural& rhs) { return lhs += rhs; }
    friend Natural operator-(Natural lhs, const Natural& rhs) { return lhs -= rhs; }
    friend Natural operator*(const Natural& lhs, const Natural& rhs);
    friend Natural operator/(const Natural& lhs, const Natural& rhs);
    friend Natural operator%(const Natural& lhs, const Natural& rhs);
    friend Natural operator<<(Natural lhs, std::size_t bits) { return lhs <<= bits; }
    friend Natural operator>>(Natural lhs, std::size_t bits) { return lhs >>= bits; }

    friend bool operator==(const Natural&, const Natural&) = default;
    friend std::strong_ordering operator<=>(const Natural& lhs, const Natural& rhs) noexcept;

    /// Quotient and remainder in one pass; throws InvalidArgument on zero divisor.
    static std::pair<Natural, Natural> divmod(const Natural& dividend, const Natural& divisor);
    /// Remainder by a single machine word (nonzero).
    std::uint32_t mod_small(std::uint32_t divisor) const;

    friend std::ostream& operator<<(std::ostream& os, const Natural& value);

private:
    void trim() noexcept;

    std::vector<Limb> limbs_;
};

/// |a - b| without signed arithmetic.
Natural abs_diff(const Natural& a, const Natural& b);

/// base^exponent with no modulus.
Natural pow(Natural base, std::uint64_t exponent);

/// (a * b) mod modulus.
Natural mod_mul(const Natural& a, const Natural& b, const Natural& modulus);

/// (a - b) mod modulus for a, b already reduced.
Natural mod_sub(const Natural& a, const Natural& b, const Natural& modulus);

/// base^exponent mod modulus by left-to-right binary exponentiation. modulus >= 2.
Natural mod_pow(const Natural& base, const Natural& exponent, const Natural& modulus);

/// gcd(0, 0) = 0.
Natural gcd(Natural a, Natural b);

/// Failure channel of mod_inverse: gcd(a, modulus) > 1 (equal to modulus when a = 0).
struct NotInvertible {
    Natural divisor;
    friend bool operator==(const NotInvertible&, const NotInvertible&) = default;
};

using InverseResult = std::variant<Natural, NotInvertible>;

/// a^-1 mod modulus, or NotInvertible carrying gcd(a, modulus). Requires modulus >= 2, a < modulus.
InverseResult mod_inverse(const Natural& a, const Natural& modulus);

/// n - 1 = 2^k * q with q odd and k >= 1.
struct TwoPowerSplit {
    std::size_t k = 0;
    Natural q;
};

/// Requires n odd and n >= 3.
TwoPowerSplit decompose_two_power(const Natural& n);

/// floor(n^(1/k)) for k >= 1.
Natural integer_root(const Natural& n, std::uint64_t k);

/// True when n = r^k for some r >= 2 and k >= 2.
bool is_perfect_power(const Natural& n);

}  // namespace randbench
