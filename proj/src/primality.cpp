#include "randbench/primality.hpp"

#include <bit>
#include <cmath>

#include "randbench/errors.hpp"

namespace randbench::primality {

namespace {

struct WordArith {
    using Value = std::uint64_t;
    static Value mul(Value a, Value b, Value m) {
        return static_cast<Value>(static_cast<unsigned __int128>(a) * b % m);
    }
    static Value power(Value base, Value exp, Value m) {
        Value result = 1 % m;
        base %= m;
        for (int i = std::bit_width(exp); i-- > 0;) {
            result = mul(result, result, m);
            if ((exp >> i) & 1U) result = mul(result, base, m);
        }
        return result;
    }
    static std::pair<std::size_t, Value> split(Value n) {
        Value m = n - 1;
        auto k = static_cast<std::size_t>(std::countr_zero(m));
        return {k, m >> k};
    }
};

struct BigArith {
    using Value = Natural;
    static Value mul(const Value& a, const Value& b, const Value& m) { return mod_mul(a, b, m); }
    static Value power(const Value& base, const Value& exp, const Value& m) { return mod_pow(base, exp, m); }
    static std::pair<std::size_t, Value> split(const Value& n) {
        auto s = decompose_two_power(n);
        return {s.k, std::move(s.q)};
    }
};

// The round exactly as stated: y = x^q; y = 1 -> yes; then k times check
// n-1 (yes), 1 (no), otherwise square; falling out of the loop is "no".
template <typename Arith>
bool run_round(const typename Arith::Value& n, const typename Arith::Value& x) {
    using Value = typename Arith::Value;
    const Value one(1);
    const Value n_minus_one = n - one;
    auto [k, q] = Arith::split(n);
    Value y = Arith::power(x, q, n);
    if (y == one) return true;
    for (std::size_t j = 1; j <= k; ++j) {
        if (y == n_minus_one) return true;
        if (y == one) return false;
        y = Arith::mul(y, y, n);
    }
    return false;
}

bool is_prime_by_trial_division(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) return false;
    }
    return true;
}

}  // namespace

double Verdict::error_bound() const noexcept {
    if (answer != Answer::ProbablyPrime || decided_directly) return 0.0;
    return std::ldexp(1.0, -2 * static_cast<int>(rounds_used));
}

Natural Verdict::error_bound_denominator() const { return Natural::power_of_two(2 * rounds_used); }

bool passes_round(const Natural& n, const Natural& x) {
    if (n.is_even() || n < Natural(3)) throw InvalidArgument("passes_round: n must be odd and at least 3");
    if (x <= Natural(1) || x >= n) throw InvalidArgument("passes_round: x must lie in (1, n)");
    if (auto small = n.to_u64()) return run_round<WordArith>(*small, x.low_u64());
    return run_round<BigArith>(n, x);
}

bool passes_round(std::uint64_t n, std::uint64_t x) {
    if (n % 2 == 0 || n < 3) throw InvalidArgument("passes_round: n must be odd and at least 3");
    if (x <= 1 || x >= n) throw InvalidArgument("passes_round: x must lie in (1, n)");
    return run_round<WordArith>(n, x);
}

std::uint64_t uniform_u64_in(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    if (hi <= lo || hi - lo < 2) throw InvalidArgument("uniform_u64_in: interval (lo, hi) is empty");
    const std::uint64_t width = hi - lo;
    const int bits = std::bit_width(width);
    const std::uint64_t mask = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    for (;;) {
        std::uint64_t offset = rng.next_u64() & mask;
        if (offset != 0 && offset < width) return lo + offset;
    }
}

Verdict is_probable_prime(const Natural& n, std::size_t rounds, Rng& rng) {
    if (rounds == 0) throw InvalidArgument("is_probable_prime: rounds must be positive");
    Verdict v;
    if (n < Natural(3) || n.is_even()) {
        v.decided_directly = true;
        v.answer = n == Natural(2) ? Answer::ProbablyPrime : Answer::Composite;
        return v;
    }
    const auto small = n.to_u64();
    v.answer = Answer::ProbablyPrime;
    for (std::size_t r = 0; r < rounds; ++r) {
        ++v.rounds_used;
        bool yes = small ? run_round<WordArith>(*small, uniform_u64_in(rng, 1, *small))
                         : run_round<BigArith>(n, uniform_natural_in(rng, Natural(1), n));
        if (!yes) {
            v.answer = Answer::Composite;
            break;
        }
    }
    return v;
}

Density witness_density(std::uint64_t n) {
    if (n < 9 || n % 2 == 0) throw InvalidArgument("witness_density: n must be odd and at least 9");
    if (n > kWitnessDensityLimit) throw InvalidArgument("witness_density: n exceeds the exhaustive-scan limit 10^6");
    if (is_prime_by_trial_division(n)) throw InvalidArgument("witness_density: n is prime");
    Density d;
    d.candidates = n - 2;
    for (std::uint64_t x = 2; x < n; ++x) {
        if (run_round<WordArith>(n, x)) ++d.passing;
    }
    return d;
}

Natural random_prime_in(const Natural& lo, const Natural& hi, std::size_t rounds, Rng& rng) {
    if (rounds == 0) throw InvalidArgument("random_prime_in: rounds must be positive");
    for (std::size_t attempt = 0; attempt < kMaxPrimeRejections; ++attempt) {
        Natural candidate = uniform_natural_in(rng, lo, hi);
        if (is_probable_prime(candidate, rounds, rng).answer == Answer::ProbablyPrime) return candidate;
    }
    throw BudgetExhausted("random_prime_in: no prime found after 10^6 draws; interval is likely primeless");
}

}  // namespace randbench::primality
