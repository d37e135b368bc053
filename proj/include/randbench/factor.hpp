#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "randbench/natural.hpp"
#include "randbench/rng.hpp"

namespace randbench::factor {

/// Affine point on y^2 = x^3 + a x + b over Z/N, or the point at infinity.
struct CurvePoint {
    Natural x;
    Natural y;
    bool at_infinity = false;

    static CurvePoint infinity() { return {Natural(), Natural(), true}; }
    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct Curve {
    Natural a;
    Natural b;
    Natural modulus;

    bool contains(const CurvePoint& p) const;
};

/// Either a point, or the divisor that made a slope non-invertible.
using PointResult = std::variant<CurvePoint, NotInvertible>;

CurvePoint negate(const CurvePoint& p, const Natural& modulus);

/// Chord-and-tangent addition modulo N. Over a composite N this is only a
/// pseudo-group law: a slope denominator sharing a factor with N surfaces as
/// NotInvertible carrying that factor.
PointResult curve_add(const CurvePoint& p, const CurvePoint& q, const Natural& a, const Natural& modulus);

/// k * p by double-and-add, propagating the first NotInvertible.
PointResult curve_multiply(const CurvePoint& p, const Natural& k, const Natural& a, const Natural& modulus);

/// Result of a Las Vegas factoring attempt. A reported divisor always satisfies
/// 1 < d < N and d | N.
struct FactorOutcome {
    std::optional<Natural> divisor;
    std::size_t curves_tried = 0;
    std::uint64_t bound = 0;
    bool found() const noexcept { return divisor.has_value(); }
};

/// Number of points on y^2 = x^3 + a x + b over GF(p), including infinity, by
/// enumeration. Requires p prime, 3 < p < 2^16, and a nonsingular curve.
std::uint64_t count_points(std::uint64_t a, std::uint64_t b, std::uint64_t p);

/// Primes <= limit in ascending order.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Product over primes r <= bound of the largest power of r not exceeding bound.
Natural smoothness_multiplier(std::uint64_t bound);

inline constexpr std::uint64_t kPm1DefaultBase = 3;

/// Pollard's p-1: d = gcd(base^M - 1 mod N, N) with M = smoothness_multiplier(bound).
/// Succeeds when some prime p | N has ord_p(base) | M while another does not.
/// Requires N odd, N > 3, not a probable prime, not a perfect power, bound >= 2.
FactorOutcome pollard_pm1(const Natural& n, std::uint64_t bound, const Natural& base = Natural(kPm1DefaultBase));

/// Stage-1 elliptic curve method with up to `max_curves` random Weierstrass curves.
/// Curve i draws from derive_stream(s, i), where s is one draw from `rng`.
/// Requires N odd composite, gcd(N, 6) = 1, not a perfect power, b1 >= 2.
FactorOutcome ecm_stage1(const Natural& n, std::uint64_t b1, std::size_t max_curves, Rng& rng);

}  // namespace randbench::factor
