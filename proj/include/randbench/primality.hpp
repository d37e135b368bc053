#pragma once

#include <cstddef>
#include <cstdint>

#include "randbench/natural.hpp"
#include "randbench/rng.hpp"

namespace randbench::primality {

enum class Answer { ProbablyPrime, Composite };

/// Outcome of a repeated probabilistic test.
///
/// Composite is always correct. ProbablyPrime after r sampled rounds is wrong
/// with probability at most 4^-r. Inputs below 3 and even inputs are answered
/// without sampling (`decided_directly`, `rounds_used` = 0, error bound 0);
/// 0 and 1 are reported as Composite in the sense of "not prime".
struct Verdict {
    Answer answer = Answer::Composite;
    std::size_t rounds_used = 0;
    bool decided_directly = false;

    /// 4^-rounds_used for a sampled ProbablyPrime, 0 otherwise.
    double error_bound() const noexcept;
    /// Denominator of the exact error bound 1 / 4^rounds_used.
    Natural error_bound_denominator() const;
};

/// One round of the randomized test with a fixed witness candidate x.
/// Returns true ("yes", n may be prime) or false ("no", n is certainly composite).
/// Requires n odd, n >= 3 and 1 < x < n.
bool passes_round(const Natural& n, const Natural& x);
bool passes_round(std::uint64_t n, std::uint64_t x);

/// Runs up to `rounds` rounds with independent uniform x in (1, n), stopping at the first "no".
Verdict is_probable_prime(const Natural& n, std::size_t rounds, Rng& rng);

/// Exact fraction passing / candidates.
struct Density {
    std::uint64_t passing = 0;
    std::uint64_t candidates = 0;
    double value() const noexcept { return static_cast<double>(passing) / static_cast<double>(candidates); }
    /// passing / candidates < num / den, decided in integers.
    bool below(std::uint64_t num, std::uint64_t den) const noexcept { return passing * den < num * candidates; }
};

inline constexpr std::uint64_t kWitnessDensityLimit = 1'000'000;

/// Fraction of x in (1, n) for which a round says "yes", by exhaustive scan.
/// Requires n odd composite with 9 <= n <= 10^6.
Density witness_density(std::uint64_t n);

inline constexpr std::size_t kMaxPrimeRejections = 1'000'000;

/// Uniform sample from the probable primes in (lo, hi) by rejection.
/// Throws BudgetExhausted after kMaxPrimeRejections consecutive non-primes.
Natural random_prime_in(const Natural& lo, const Natural& hi, std::size_t rounds, Rng& rng);

/// Same sampling rule as uniform_natural_in restricted to 64-bit bounds; consumes
/// the generator identically.
std::uint64_t uniform_u64_in(Rng& rng, std::uint64_t lo, std::uint64_t hi);

}  // namespace randbench::primality
