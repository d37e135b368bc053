#include <doctest.h>

#include <vector>

#include "randbench/errors.hpp"
#include "randbench/natural.hpp"
#include "randbench/primality.hpp"
#include "randbench/rng.hpp"

using randbench::Natural;
using randbench::Rng;
namespace pr = randbench::primality;

namespace {

std::vector<bool> sieve(std::size_t limit) {
    std::vector<bool> prime(limit, true);
    prime[0] = false;
    if (limit > 1) prime[1] = false;
    for (std::size_t i = 2; i * i < limit; ++i) {
        if (!prime[i]) continue;
        for (std::size_t j = i * i; j < limit; j += i) prime[j] = false;
    }
    return prime;
}

}  // namespace

TEST_CASE("single rounds with fixed witnesses") {
    CHECK_FALSE(pr::passes_round(561, 2));
    CHECK(pr::passes_round(7, 2));
    CHECK(pr::passes_round(1729, 1728));
    CHECK(pr::passes_round(Natural(7), Natural(2)));
    CHECK_FALSE(pr::passes_round(Natural(561), Natural(2)));
    // 2047 = 23 * 89 is a strong pseudoprime to base 2.
    CHECK(pr::passes_round(2047, 2));
    CHECK_FALSE(pr::passes_round(2047, 3));

    CHECK_THROWS_AS(pr::passes_round(10, 3), randbench::InvalidArgument);
    CHECK_THROWS_AS(pr::passes_round(11, 1), randbench::InvalidArgument);
    CHECK_THROWS_AS(pr::passes_round(11, 11), randbench::InvalidArgument);
}

TEST_CASE("word and multiprecision rounds agree") {
    Rng rng(21);
    for (int i = 0; i < 3000; ++i) {
        const std::uint64_t n = (rng.next_u64() >> rng.uniform_below(60)) | 1U;
        if (n < 5) continue;
        const std::uint64_t x = 2 + rng.uniform_below(n - 2);
        CHECK(pr::passes_round(n, x) == pr::passes_round(Natural(n), Natural(x)));
    }
}

TEST_CASE("witness densities match the exhaustive oracle") {
    struct Row {
        std::uint64_t n, passing, candidates;
    };
    const Row rows[] = {{9, 1, 7},         {15, 1, 13},        {21, 1, 19},       {25, 3, 23},
                        {91, 17, 89},      {561, 9, 559},      {703, 161, 701},   {1105, 29, 1103},
                        {1729, 161, 1727}, {2047, 241, 2045},  {3277, 293, 3275}, {4681, 449, 4679},
                        {8911, 1781, 8909}};
    for (const auto& r : rows) {
        CAPTURE(r.n);
        const auto d = pr::witness_density(r.n);
        CHECK(d.passing == r.passing);
        CHECK(d.candidates == r.candidates);
        CHECK(d.below(1, 4));
    }
    CHECK(pr::witness_density(561).value() == doctest::Approx(0.0161).epsilon(0.01));
    CHECK(pr::witness_density(1729).value() == doctest::Approx(0.0932).epsilon(0.01));

    CHECK_THROWS_AS(pr::witness_density(7), randbench::InvalidArgument);
    CHECK_THROWS_AS(pr::witness_density(13), randbench::InvalidArgument);
    CHECK_THROWS_AS(pr::witness_density(10), randbench::InvalidArgument);
    CHECK_THROWS_AS(pr::witness_density(1'000'003), randbench::InvalidArgument);
}

TEST_CASE("density predicate is exact") {
    pr::Density d{1, 4};
    CHECK_FALSE(d.below(1, 4));
    d.passing = 249;
    d.candidates = 1000;
    CHECK(d.below(1, 4));
}

TEST_CASE("is_probable_prime direct answers") {
    Rng rng(0);
    for (std::uint64_t n : {0ULL, 1ULL, 4ULL, 100ULL}) {
        const auto v = pr::is_probable_prime(Natural(n), 5, rng);
        CHECK(v.answer == pr::Answer::Composite);
        CHECK(v.decided_directly);
        CHECK(v.rounds_used == 0);
        CHECK(v.error_bound() == 0.0);
    }
    const auto two = pr::is_probable_prime(Natural(2), 5, rng);
    CHECK(two.answer == pr::Answer::ProbablyPrime);
    CHECK(two.rounds_used == 0);
    CHECK(rng == Rng(0));
    CHECK_THROWS_AS(pr::is_probable_prime(Natural(7), 0, rng), randbench::InvalidArgument);
}

TEST_CASE("error bound is 4^-rounds") {
    Rng rng(0);
    const auto v = pr::is_probable_prime(Natural(1'000'000'007), 10, rng);
    CHECK(v.answer == pr::Answer::ProbablyPrime);
    CHECK(v.rounds_used == 10);
    CHECK(v.error_bound() == doctest::Approx(1.0 / 1048576.0));
    CHECK(v.error_bound() < 1e-6);
    CHECK(v.error_bound_denominator() == Natural::power_of_two(20));
}

TEST_CASE("Carmichael numbers are rejected") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (std::uint64_t n : {561ULL, 1105ULL, 1729ULL, 2465ULL, 2821ULL, 6601ULL, 8911ULL}) {
            Rng rng(seed);
            CHECK(pr::is_probable_prime(Natural(n), 10, rng).answer == pr::Answer::Composite);
        }
    }
}

TEST_CASE("agreement with a sieve below 10^4") {
    const auto prime = sieve(10'000);
    Rng rng(0);
    for (std::uint64_t n = 0; n < 10'000; ++n) {
        const bool probable = pr::is_probable_prime(Natural(n), 20, rng).answer == pr::Answer::ProbablyPrime;
        CHECK_MESSAGE(probable == prime[n], "n = " << n);
    }
}

TEST_CASE("known large primes and composites") {
    Rng rng(4);
    const Natural m127 = Natural::power_of_two(127) - Natural(1);
    const Natural m521 = Natural::power_of_two(521) - Natural(1);
    CHECK(pr::is_probable_prime(m127, 20, rng).answer == pr::Answer::ProbablyPrime);
    CHECK(pr::is_probable_prime(m521, 20, rng).answer == pr::Answer::ProbablyPrime);
    CHECK(pr::is_probable_prime(m127 * m521, 20, rng).answer == pr::Answer::Composite);
    CHECK(pr::is_probable_prime(Natural::power_of_two(128) + Natural(1), 20, rng).answer == pr::Answer::Composite);
    CHECK(pr::is_probable_prime(Natural(18446744073709551557ULL), 20, rng).answer == pr::Answer::ProbablyPrime);
}

TEST_CASE("word path consumes the generator like the general sampler") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng a(seed);
        Rng b(seed);
        const std::uint64_t n = 1'000'000'007;
        const auto x = pr::uniform_u64_in(a, 1, n);
        const auto y = randbench::uniform_natural_in(b, Natural(1), Natural(n));
        CHECK(Natural(x) == y);
        CHECK(a == b);
    }
}

TEST_CASE("random primes") {
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        const Natural p = pr::random_prime_in(Natural(1'000'000'000), Natural(2'000'000'000), 20, rng);
        CHECK(p > Natural(1'000'000'000));
        CHECK(p < Natural(2'000'000'000));
        const auto word = *p.to_u64();
        bool composite = false;
        for (std::uint64_t f = 2; f * f <= word && !composite; ++f) composite = word % f == 0;
        CHECK_FALSE(composite);
    }
    CHECK_THROWS_AS(pr::random_prime_in(Natural(32), Natural(36), 20, rng), randbench::BudgetExhausted);
}
