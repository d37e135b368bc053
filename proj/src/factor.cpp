#include "randbench/factor.hpp"

#include "randbench/errors.hpp"
#include "randbench/primality.hpp"

namespace randbench::factor {

namespace {

// Fixed stream for the composite precondition check so it never perturbs the caller's generator.
constexpr std::uint64_t kPreconditionSeed = 0x5eed;
constexpr std::size_t kPreconditionRounds = 25;

bool is_probable_prime(const Natural& n) {
    Rng rng(kPreconditionSeed);
    return primality::is_probable_prime(n, kPreconditionRounds, rng).answer == primality::Answer::ProbablyPrime;
}

Natural checked_divisor(const Natural& d, const Natural& n) {
    if (d <= Natural(1) || d >= n || !(n % d).is_zero()) {
        throw InternalError("factor: candidate divisor " + d.to_decimal() + " does not properly divide " +
                            n.to_decimal());
    }
    return d;
}

// Largest power of r that does not exceed bound.
std::uint64_t max_power_within(std::uint64_t r, std::uint64_t bound) {
    std::uint64_t power = r;
    while (power <= bound / r) power *= r;
    return power;
}

}  // namespace

bool Curve::contains(const CurvePoint& p) const {
    if (p.at_infinity) return true;
    const Natural lhs = mod_mul(p.y, p.y, modulus);
    const Natural rhs = (mod_mul(mod_mul(p.x, p.x, modulus), p.x, modulus) + mod_mul(a, p.x, modulus) + b) % modulus;
    return lhs == rhs;
}

std::uint64_t count_points(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    if (p <= 3 || p >= (1U << 16)) throw InvalidArgument("count_points: p must lie in (3, 2^16)");
    a %= p;
    b %= p;
    if ((4 * a % p * a % p * a + 27 * b % p * b) % p == 0) throw InvalidArgument("count_points: singular curve");
    std::vector<std::uint64_t> square_roots(p, 0);
    for (std::uint64_t y = 0; y < p; ++y) ++square_roots[y * y % p];
    std::uint64_t points = 1;
    for (std::uint64_t x = 0; x < p; ++x) points += square_roots[(x * x % p * x + a * x + b) % p];
    return points;
}

CurvePoint negate(const CurvePoint& p, const Natural& modulus) {
    if (p.at_infinity || p.y.is_zero()) return p;
    return {p.x, modulus - p.y, false};
}

PointResult curve_add(const CurvePoint& p, const CurvePoint& q, const Natural& a, const Natural& modulus) {
    if (p.at_infinity) return q;
    if (q.at_infinity) return p;
    const Natural& n = modulus;

    Natural numerator;
    Natural denominator;
    if (p.x == q.x) {
        const Natural y_sum = (p.y + q.y) % n;
        if (y_sum.is_zero()) return CurvePoint::infinity();
        if (p.y != q.y) {
            // x agrees but y is neither equal nor opposite mod N: the signs split across
            // the prime factors, and y1 + y2 shares a proper factor with N.
            return NotInvertible{gcd(y_sum, n)};
        }
        // Tangent: (3x^2 + a) / 2y
        numerator = (Natural(3) * mod_mul(p.x, p.x, n) + a) % n;
        denominator = y_sum;
    } else {
        numerator = mod_sub(q.y, p.y, n);
        denominator = mod_sub(q.x, p.x, n);
    }

    auto inverse = mod_inverse(denominator, n);
    if (auto* failure = std::get_if<NotInvertible>(&inverse)) return *failure;
    const Natural slope = mod_mul(numerator, std::get<Natural>(inverse), n);

    Natural x3 = mod_sub(mod_mul(slope, slope, n), (p.x + q.x) % n, n);
    Natural y3 = mod_sub(mod_mul(slope, mod_sub(p.x, x3, n), n), p.y, n);
    return CurvePoint{std::move(x3), std::move(y3), false};
}

PointResult curve_multiply(const CurvePoint& p, const Natural& k, const Natural& a, const Natural& modulus) {
    CurvePoint acc = CurvePoint::infinity();
    for (std::size_t i = k.bit_length(); i-- > 0;) {
        auto doubled = curve_add(acc, acc, a, modulus);
        if (std::holds_alternative<NotInvertible>(doubled)) return doubled;
        acc = std::get<CurvePoint>(std::move(doubled));
        if (k.test_bit(i)) {
            auto sum = curve_add(acc, p, a, modulus);
            if (std::holds_alternative<NotInvertible>(sum)) return sum;
            acc = std::get<CurvePoint>(std::move(sum));
        }
    }
    return acc;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

Natural smoothness_multiplier(std::uint64_t bound) {
    Natural m(1);
    for (std::uint64_t r : primes_up_to(bound)) m *= Natural(max_power_within(r, bound));
    return m;
}

FactorOutcome pollard_pm1(const Natural& n, std::uint64_t bound, const Natural& base) {
    if (n.is_even() || n <= Natural(3)) throw InvalidArgument("pollard_pm1: N must be odd and greater than 3");
    if (bound < 2) throw InvalidArgument("pollard_pm1: bound must be at least 2");
    if (base < Natural(2)) throw InvalidArgument("pollard_pm1: base must be at least 2");
    if (is_probable_prime(n)) throw InvalidArgument("pollard_pm1: N is a probable prime");
    if (is_perfect_power(n)) throw InvalidArgument("pollard_pm1: N is a perfect power");

    FactorOutcome outcome;
    outcome.bound = bound;
    if (Natural shared = gcd(base % n, n); shared > Natural(1) && shared < n) {
        outcome.divisor = checked_divisor(shared, n);
        return outcome;
    }
    const Natural a = mod_pow(base, smoothness_multiplier(bound), n);
    const Natural d = gcd(mod_sub(a, Natural(1), n), n);
    if (d > Natural(1) && d < n) outcome.divisor = checked_divisor(d, n);
    return outcome;
}

FactorOutcome ecm_stage1(const Natural& n, std::uint64_t b1, std::size_t max_curves, Rng& rng) {
    if (n.is_even() || n.mod_small(3) == 0) throw InvalidArgument("ecm_stage1: N must be coprime to 6");
    if (n < Natural(25)) throw InvalidArgument("ecm_stage1: N must be composite");
    if (b1 < 2) throw InvalidArgument("ecm_stage1: b1 must be at least 2");
    if (max_curves == 0) throw InvalidArgument("ecm_stage1: max_curves must be positive");
    if (is_probable_prime(n)) throw InvalidArgument("ecm_stage1: N is a probable prime");
    if (is_perfect_power(n)) throw InvalidArgument("ecm_stage1: N is a perfect power");

    const std::vector<std::uint64_t> primes = primes_up_to(b1);
    const std::uint64_t stream_seed = rng.next_u64();

    FactorOutcome outcome;
    outcome.bound = b1;
    for (std::size_t curve_index = 0; curve_index < max_curves; ++curve_index) {
        outcome.curves_tried = curve_index + 1;
        Rng curve_rng = derive_stream(stream_seed, curve_index);
        const Natural x0 = uniform_natural_below(curve_rng, n);
        const Natural y0 = uniform_natural_below(curve_rng, n);
        const Natural a = uniform_natural_below(curve_rng, n);
        // b chosen so that (x0, y0) lies on the curve.
        const Natural x0_cubed = mod_mul(mod_mul(x0, x0, n), x0, n);
        const Natural b = mod_sub(mod_sub(mod_mul(y0, y0, n), x0_cubed, n), mod_mul(a, x0, n), n);

        const Natural discriminant =
            (Natural(4) * mod_mul(mod_mul(a, a, n), a, n) + Natural(27) * mod_mul(b, b, n)) % n;
        const Natural g = gcd(discriminant, n);
        if (g == n) continue;
        if (g > Natural(1)) {
            outcome.divisor = checked_divisor(g, n);
            return outcome;
        }

        CurvePoint point{x0, y0, false};
        for (std::uint64_t r : primes) {
            const Natural multiplier(max_power_within(r, b1));
            auto next = curve_multiply(point, multiplier, a, n);
            if (auto* failure = std::get_if<NotInvertible>(&next)) {
                if (failure->divisor < n) {
                    outcome.divisor = checked_divisor(failure->divisor, n);
                    return outcome;
                }
                break;  // every prime factor hit at once; try another curve
            }
            point = std::get<CurvePoint>(std::move(next));
            if (point.at_infinity) break;
        }
    }
    return outcome;
}

}  // namespace randbench::factor
