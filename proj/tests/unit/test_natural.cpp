#include <doctest.h>

#include <fstream>
#include <sstream>

#include "randbench/errors.hpp"
#include "randbench/natural.hpp"
#include "randbench/rng.hpp"

using randbench::Natural;

namespace {

Natural hex(const std::string& s) { return Natural::parse(s); }

}  // namespace

TEST_CASE("parse and format") {
    CHECK(Natural::parse("0").is_zero());
    CHECK(Natural::parse("0x0").is_zero());
    CHECK(Natural::parse("1_000_000").to_u64() == 1'000'000);
    CHECK(Natural::parse("0XfF").to_u64() == 255);
    CHECK(Natural(0).to_decimal() == "0");
    CHECK(Natural(0).to_hex() == "0x0");
    CHECK(Natural(255).to_hex() == "0xff");
    CHECK(Natural::power_of_two(64).to_decimal() == "18446744073709551616");
    CHECK_THROWS_AS(Natural::parse(""), randbench::InvalidArgument);
    CHECK_THROWS_AS(Natural::parse("12a"), randbench::InvalidArgument);
    CHECK_THROWS_AS(Natural::parse("0x"), randbench::InvalidArgument);

    std::ostringstream os;
    os << Natural(4294967297ULL);
    CHECK(os.str() == "4294967297");
}

TEST_CASE("byte conversion") {
    const std::vector<std::uint8_t> bytes{0x01, 0x00};
    CHECK(Natural::from_bytes_be(bytes).to_u64() == 256);
    CHECK(Natural::from_bytes_be({}).is_zero());
    CHECK(Natural(0x010203).to_bytes_be() == std::vector<std::uint8_t>{1, 2, 3});
    CHECK(Natural().to_bytes_be().empty());

    randbench::Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const Natural n = randbench::random_bits(rng, 1 + rng.uniform_below(300));
        CHECK(Natural::from_bytes_be(n.to_bytes_be()) == n);
        CHECK(Natural::parse(n.to_decimal()) == n);
        CHECK(Natural::parse(n.to_hex()) == n);
    }
}

TEST_CASE("bit queries") {
    CHECK(Natural().bit_length() == 0);
    CHECK(Natural(1).bit_length() == 1);
    CHECK(Natural::power_of_two(100).bit_length() == 101);
    CHECK(Natural::power_of_two(100).trailing_zeros() == 100);
    CHECK(Natural::power_of_two(100).test_bit(100));
    CHECK_FALSE(Natural::power_of_two(100).test_bit(99));
    CHECK(Natural(12).trailing_zeros() == 2);
    CHECK(Natural::power_of_two(70).to_u64() == std::nullopt);
    CHECK((Natural::power_of_two(70) + Natural(5)).low_u64() == 5);
    CHECK(Natural::parse("1000000000000000000000007").mod_small(1'000'000'007) == 49'000'007);
}

TEST_CASE("arithmetic errors") {
    CHECK_THROWS_AS(Natural(3) - Natural(4), randbench::InvalidArgument);
    CHECK_THROWS_AS(Natural(3) / Natural(), randbench::InvalidArgument);
    CHECK_THROWS_AS(Natural(3) % Natural(), randbench::InvalidArgument);
    CHECK_THROWS_AS(randbench::mod_pow(Natural(2), Natural(3), Natural(1)), randbench::InvalidArgument);
    CHECK(randbench::abs_diff(Natural(3), Natural(10)) == Natural(7));
    CHECK(randbench::abs_diff(Natural(10), Natural(3)) == Natural(7));
}

TEST_CASE("oracle vectors") {
    std::ifstream in(RANDBENCH_TEST_DATA "/natural_vectors.txt");
    REQUIRE(in);
    std::string line;
    std::size_t cases = 0;
    while (std::getline(in, line)) {
        std::istringstream words(line);
        std::string op;
        words >> op;
        CAPTURE(line);
        ++cases;
        if (op == "dec") {
            std::string h, d;
            words >> h >> d;
            CHECK(hex(h).to_decimal() == d);
            CHECK(Natural::from_decimal(d) == hex(h));
        } else if (op == "root") {
            std::string n, want;
            std::uint64_t k;
            words >> n >> k >> want;
            CHECK(randbench::integer_root(hex(n), k) == hex(want));
        } else if (op == "shl" || op == "shr") {
            std::string n, want;
            std::size_t s;
            words >> n >> s >> want;
            CHECK((op == "shl" ? hex(n) << s : hex(n) >> s) == hex(want));
        } else if (op == "powmod") {
            std::string a, e, m, want;
            words >> a >> e >> m >> want;
            CHECK(randbench::mod_pow(hex(a), hex(e), hex(m)) == hex(want));
        } else if (op == "inv") {
            std::string a, m, want;
            words >> a >> m >> want;
            const auto r = randbench::mod_inverse(hex(a), hex(m));
            if (want.rfind("none:", 0) == 0) {
                REQUIRE(std::holds_alternative<randbench::NotInvertible>(r));
                CHECK(std::get<randbench::NotInvertible>(r).divisor == hex(want.substr(5)));
            } else {
                REQUIRE(std::holds_alternative<Natural>(r));
                CHECK(std::get<Natural>(r) == hex(want));
            }
        } else {
            std::string a, b, want;
            words >> a >> b >> want;
            const Natural x = hex(a);
            const Natural y = hex(b);
            if (op == "add") CHECK(x + y == hex(want));
            else if (op == "sub") CHECK(x - y == hex(want));
            else if (op == "mul") CHECK(x * y == hex(want));
            else if (op == "div") CHECK(x / y == hex(want));
            else if (op == "mod") CHECK(x % y == hex(want));
            else if (op == "gcd") CHECK(randbench::gcd(x, y) == hex(want));
            else FAIL("unknown op " << op);
        }
    }
    CHECK(cases > 4000);
}

TEST_CASE("division identity on random operands") {
    randbench::Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const Natural a = randbench::random_bits(rng, rng.uniform_below(512));
        Natural b = randbench::random_bits(rng, 1 + rng.uniform_below(256));
        if (b.is_zero()) b = Natural(1);
        const auto [q, r] = Natural::divmod(a, b);
        CHECK(r < b);
        CHECK(q * b + r == a);
    }
}

TEST_CASE("ordering") {
    CHECK(Natural(3) < Natural(4));
    CHECK(Natural::power_of_two(64) > Natural(~std::uint64_t{0}));
    CHECK(Natural(5) == Natural(5));
    CHECK((Natural(7) <=> Natural(7)) == std::strong_ordering::equal);
}

TEST_CASE("modular helpers") {
    const Natural m(101);
    CHECK(randbench::mod_mul(Natural(50), Natural(3), m) == Natural(49));
    CHECK(randbench::mod_sub(Natural(3), Natural(50), m) == Natural(54));
    CHECK(randbench::mod_pow(Natural(2), Natural(), m) == Natural(1));
    CHECK(randbench::pow(Natural(2), 10) == Natural(1024));
    CHECK(randbench::pow(Natural(0), 0) == Natural(1));
    CHECK(randbench::gcd(Natural(), Natural()).is_zero());

    // Fermat's little theorem on a few primes.
    for (std::uint64_t p : {3ULL, 65537ULL, 2147483647ULL, 1000000007ULL}) {
        CHECK(randbench::mod_pow(Natural(2), Natural(p - 1), Natural(p)) == Natural(1));
    }
}

TEST_CASE("two-power split") {
    auto s = randbench::decompose_two_power(Natural(561));
    CHECK(s.k == 4);
    CHECK(s.q == Natural(35));
    s = randbench::decompose_two_power(Natural(3));
    CHECK(s.k == 1);
    CHECK(s.q == Natural(1));
    CHECK_THROWS_AS(randbench::decompose_two_power(Natural(10)), randbench::InvalidArgument);
    CHECK_THROWS_AS(randbench::decompose_two_power(Natural(1)), randbench::InvalidArgument);
}

TEST_CASE("perfect powers") {
    CHECK(randbench::is_perfect_power(Natural(4)));
    CHECK(randbench::is_perfect_power(Natural(27)));
    CHECK(randbench::is_perfect_power(randbench::pow(Natural(3), 41)));
    CHECK(randbench::is_perfect_power(randbench::pow(Natural(1000003), 2)));
    CHECK_FALSE(randbench::is_perfect_power(Natural(2)));
    CHECK_FALSE(randbench::is_perfect_power(Natural(187)));
    CHECK_FALSE(randbench::is_perfect_power(Natural::power_of_two(2048) + Natural(1)));
    CHECK(randbench::integer_root(Natural(5), 100) == Natural(1));
    CHECK(randbench::integer_root(Natural(), 3).is_zero());
}
