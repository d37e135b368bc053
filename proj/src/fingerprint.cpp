#include "randbench/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "randbench/errors.hpp"
#include "randbench/primality.hpp"

namespace randbench::fingerprint {

Document Document::from_string(std::string_view text) {
    return Document(std::vector<std::uint8_t>(text.begin(), text.end()));
}

Document Document::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return Document(std::move(bytes));
}

std::span<const std::uint8_t> Document::slice(ByteRange range) const {
    if (range.offset > bytes_.size() || range.length > bytes_.size() - range.offset) {
        throw InvalidArgument("byte range [" + std::to_string(range.offset) + ", " + std::to_string(range.end()) +
                              ") exceeds document length " + std::to_string(bytes_.size()));
    }
    return std::span<const std::uint8_t>(bytes_).subspan(range.offset, range.length);
}

Natural residue(std::span<const std::uint8_t> bytes, const Natural& p) {
    if (p < Natural(2)) throw InvalidArgument("residue: modulus must be at least 2");
    if (auto word = p.to_u64()) {
        const unsigned __int128 m = *word;
        unsigned __int128 r = 0;
        for (std::uint8_t b : bytes) r = ((r << 8) | b) % m;
        return Natural(static_cast<std::uint64_t>(r));
    }
    Natural r;
    for (std::uint8_t b : bytes) {
        r <<= 8;
        r += Natural(b);
        if (r >= p) r %= p;
    }
    return r;
}

Natural LocalOracle::residue(ByteRange range, const Natural& p) { return fingerprint::residue(doc_->slice(range), p); }

std::string format_query(ByteRange range, const Natural& p) {
    return "Q " + std::to_string(range.offset) + " " + std::to_string(range.length) + " " + p.to_decimal();
}

std::string format_length_query() { return "L"; }

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) words.push_back(line.substr(start, i - start));
    }
    return words;
}

std::uint64_t parse_u64(std::string_view text) {
    auto value = Natural::from_decimal(text).to_u64();
    if (!value) throw InvalidArgument("value out of 64-bit range");
    return *value;
}

}  // namespace

std::string ResidueServer::handle(std::string_view request) const {
    auto words = split_words(request);
    try {
        if (words.size() == 1 && words[0] == "L") return "R " + std::to_string(doc_.size());
        if (words.size() == 4 && words[0] == "Q") {
            ByteRange range{parse_u64(words[1]), parse_u64(words[2])};
            Natural p = Natural::from_decimal(words[3]);
            return "R " + residue(doc_.slice(range), p).to_decimal();
        }
    } catch (const InvalidArgument& e) {
        return std::string("E ") + e.what();
    }
    return "E malformed request";
}

std::size_t ResidueServer::serve(std::istream& in, std::ostream& out) const {
    std::size_t served = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (split_words(line).empty()) continue;
        out << handle(line) << '\n' << std::flush;
        ++served;
    }
    return served;
}

Natural parse_response(std::string_view line) {
    auto words = split_words(line);
    if (words.size() == 2 && words[0] == "R") {
        try {
            return Natural::from_decimal(words[1]);
        } catch (const InvalidArgument&) {
        }
    }
    if (!words.empty() && words[0] == "E") throw TransportError("remote error: " + std::string(line.substr(2)));
    throw TransportError("malformed response '" + std::string(line) + "'");
}

Natural StreamOracle::exchange(const std::string& request) {
    *out_ << request << '\n' << std::flush;
    if (!*out_) throw TransportError("cannot write request to remote");
    std::string line;
    if (!std::getline(*in_, line)) throw TransportError("remote closed the connection");
    return parse_response(line);
}

Natural StreamOracle::residue(ByteRange range, const Natural& p) { return exchange(format_query(range, p)); }

std::optional<std::uint64_t> StreamOracle::length() {
    auto value = exchange(format_length_query()).to_u64();
    if (!value) throw TransportError("remote length out of range");
    return *value;
}

bool PrimeSource::is_default_interval() const {
    return lo == Natural(1'000'000'000) && hi == Natural(2'000'000'000);
}

std::uint64_t count_primes_in(std::uint64_t lo, std::uint64_t hi) {
    if (lo == 1'000'000'000 && hi == 2'000'000'000) return kPrimesInDefaultInterval;
    if (hi > 1'000'000'000'000ULL || (hi > lo && hi - lo > 2'000'000'000ULL)) {
        throw InvalidArgument("count_primes_in: interval too large to sieve");
    }
    if (hi <= lo + 1) return 0;
    const std::uint64_t first = lo + 1;
    const std::uint64_t last = hi - 1;
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(last))) + 1;
    std::vector<bool> small_composite(root + 1, false);
    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (small_composite[i]) continue;
        base.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i) small_composite[j] = true;
    }
    constexpr std::uint64_t kSegment = 1 << 22;
    std::vector<std::uint8_t> composite(kSegment);
    std::uint64_t count = 0;
    for (std::uint64_t start = first; start <= last; start += kSegment) {
        const std::uint64_t end = std::min(last, start + kSegment - 1);
        std::fill(composite.begin(), composite.end(), 0);
        for (std::uint64_t p : base) {
            if (p * p > end) break;
            std::uint64_t m = std::max(p * p, (start + p - 1) / p * p);
            for (; m <= end; m += p) composite[m - start] = 1;
        }
        for (std::uint64_t v = start; v <= end; ++v) {
            if (v >= 2 && !composite[v - start]) ++count;
        }
    }
    return count;
}

std::uint64_t max_prime_divisors_above(const Natural& lo, std::uint64_t bits) {
    if (lo.is_zero()) throw InvalidArgument("max_prime_divisors_above: lo must be positive");
    const Natural factor = lo + Natural(1);
    if (bits == 0) return 0;
    const std::size_t width = factor.bit_length();
    if (factor.trailing_zeros() + 1 == width) return (bits - 1) / (width - 1);

    // Otherwise log2(factor) is irrational, so k * log2(factor) < bits is decided
    // in floating point unless it lands within rounding distance of bits.
    const std::size_t shift = width > 64 ? width - 64 : 0;
    const long double log2_factor =
        static_cast<long double>(shift) + std::log2(static_cast<long double>((factor >> shift).low_u64()));
    auto k = static_cast<std::uint64_t>(static_cast<long double>(bits) / log2_factor);
    const auto exact_below = [&](std::uint64_t exponent) { return pow(factor, exponent) < Natural::power_of_two(bits); };
    const long double slack = static_cast<long double>(bits) - static_cast<long double>(k) * log2_factor;
    if (bits <= 65536 || slack < 1e-6L || log2_factor - slack < 1e-6L) {
        while (k > 0 && !exact_below(k)) --k;
        while (exact_below(k + 1)) ++k;
    }
    return k;
}

namespace {

Natural draw_prime(const PrimeSource& primes, Rng& rng) {
    return primality::random_prime_in(primes.lo, primes.hi, primes.primality_rounds, rng);
}

// Compares one byte range with up to `rounds` primes; true when all residues agree.
bool probe(const Document& local, ResidueOracle& remote, ByteRange range, std::size_t rounds, Rng& rng,
           const PrimeSource& primes, std::size_t& queries) {
    const auto bytes = local.slice(range);
    for (std::size_t r = 0; r < rounds; ++r) {
        Natural p = draw_prime(primes, rng);
        ++queries;
        if (remote.residue(range, p) != residue(bytes, p)) return false;
    }
    return true;
}

void bisect(const Document& local, ResidueOracle& remote, ByteRange range, std::size_t rounds, Rng& rng,
            const PrimeSource& primes, LocalizeReport& report) {
    if (range.length <= 1) {
        report.corrupted.push_back(range);
        return;
    }
    const ByteRange left{range.offset, range.length / 2};
    const ByteRange right{left.end(), range.length - left.length};
    report.probes += 2;
    const bool left_equal = probe(local, remote, left, rounds, rng, primes, report.queries);
    const bool right_equal = probe(local, remote, right, rounds, rng, primes, report.queries);
    if (left_equal && right_equal) {
        // Both halves fingerprint equal although the whole did not: a false
        // match somewhere below. Report the unresolved range rather than guess.
        report.corrupted.push_back(range);
        return;
    }
    if (!left_equal) bisect(local, remote, left, rounds, rng, primes, report);
    if (!right_equal) bisect(local, remote, right, rounds, rng, primes, report);
}

}  // namespace

VerifyReport verify(const Document& local, ResidueOracle& remote, std::size_t rounds, Rng& rng,
                    const PrimeSource& primes) {
    if (rounds == 0) throw InvalidArgument("verify: rounds must be positive");
    VerifyReport report;

    std::uint64_t longest = local.size();
    if (auto remote_length = remote.length()) {
        longest = std::max(longest, *remote_length);
        if (*remote_length != local.size()) {
            report.verdict = Verdict::Mismatch;
            report.length_mismatch = true;
        }
    }

    report.max_prime_divisors = max_prime_divisors_above(primes.lo, 8 * longest);
    if (auto lo = primes.lo.to_u64(), hi = primes.hi.to_u64(); lo && hi) {
        try {
            report.primes_in_interval = count_primes_in(*lo, *hi);
        } catch (const InvalidArgument&) {
            report.primes_in_interval = 0;
        }
    }

    if (!report.length_mismatch) {
        const ByteRange whole{0, local.size()};
        for (std::size_t r = 0; r < rounds; ++r) {
            Natural p = draw_prime(primes, rng);
            ResiduePair pair{residue(local, p), remote.residue(whole, p)};
            const bool equal = pair.local == pair.remote;
            report.primes_used.push_back(std::move(p));
            report.residue_pairs.push_back(std::move(pair));
            ++report.rounds;
            if (!equal) {
                report.verdict = Verdict::Mismatch;
                break;
            }
        }
    }

    if (report.primes_in_interval > 0) {
        const double per_round = std::min(
            1.0, static_cast<double>(report.max_prime_divisors) / static_cast<double>(report.primes_in_interval));
        report.false_positive_bound = std::pow(per_round, static_cast<double>(std::max<std::size_t>(report.rounds, 1)));
    }
    return report;
}

LocalizeReport localize(const Document& local, ResidueOracle& remote, std::size_t rounds_per_probe, Rng& rng,
                        const PrimeSource& primes) {
    if (rounds_per_probe == 0) throw InvalidArgument("localize: rounds_per_probe must be positive");
    if (auto remote_length = remote.length(); remote_length && *remote_length != local.size()) {
        throw InvalidArgument("localize: documents differ in length (" + std::to_string(local.size()) + " vs " +
                              std::to_string(*remote_length) + ")");
    }
    LocalizeReport report;
    const ByteRange whole{0, local.size()};
    report.probes = 1;
    if (local.size() == 0 || probe(local, remote, whole, rounds_per_probe, rng, primes, report.queries)) {
        return report;
    }
    bisect(local, remote, whole, rounds_per_probe, rng, primes, report);
    return report;
}

}  // namespace randbench::fingerprint
