#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "randbench/natural.hpp"
#include "randbench/rng.hpp"

namespace randbench::fingerprint {

/// Half-open byte span [offset, offset + length).
struct ByteRange {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
    std::uint64_t end() const noexcept { return offset + length; }
    friend bool operator==(const ByteRange&, const ByteRange&) = default;
};

/// A byte string read as a big-endian multiple-precision integer.
class Document {
public:
    Document() = default;
    explicit Document(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}
    static Document from_string(std::string_view text);
    static Document from_file(const std::filesystem::path& path);

    std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
    std::span<const std::uint8_t> slice(ByteRange range) const;
    std::uint64_t size() const noexcept { return bytes_.size(); }
    Natural as_natural() const { return Natural::from_bytes_be(bytes_); }

    friend bool operator==(const Document&, const Document&) = default;

private:
    std::vector<std::uint8_t> bytes_;
};

/// bytes (big-endian) mod p, streamed with Horner's rule. Requires p >= 2.
Natural residue(std::span<const std::uint8_t> bytes, const Natural& p);
inline Natural residue(const Document& doc, const Natural& p) { return residue(doc.bytes(), p); }

/// The remote party: answers residue queries about its own copy of the document.
class ResidueOracle {
public:
    virtual ~ResidueOracle() = default;
    /// Residue of the remote bytes in `range` modulo p. Throws TransportError on failure.
    virtual Natural residue(ByteRange range, const Natural& p) = 0;
    /// Remote document length, if the transport can report it.
    virtual std::optional<std::uint64_t> length() = 0;
};

/// Oracle over a document held in the same process.
class LocalOracle final : public ResidueOracle {
public:
    explicit LocalOracle(const Document& doc) : doc_(&doc) {}
    Natural residue(ByteRange range, const Natural& p) override;
    std::optional<std::uint64_t> length() override { return doc_->size(); }

private:
    const Document* doc_;
};

/// Line protocol, one request per line:
///   `Q <offset> <length> <prime>`  ->  `R <residue>`
///   `L`                            ->  `R <document length>`
/// Malformed or out-of-range requests get `E <message>`. All numbers decimal.
std::string format_query(ByteRange range, const Natural& p);
std::string format_length_query();

/// Serving side of the line protocol.
class ResidueServer {
public:
    explicit ResidueServer(Document doc) : doc_(std::move(doc)) {}
    /// Response line (without newline) for one request line.
    std::string handle(std::string_view request) const;
    /// Answers requests until end of input; returns the number of requests served.
    std::size_t serve(std::istream& in, std::ostream& out) const;

private:
    Document doc_;
};

/// Client side of the line protocol over a pair of streams.
class StreamOracle final : public ResidueOracle {
public:
    StreamOracle(std::istream& in, std::ostream& out) : in_(&in), out_(&out) {}
    Natural residue(ByteRange range, const Natural& p) override;
    std::optional<std::uint64_t> length() override;

private:
    Natural exchange(const std::string& request);

    std::istream* in_;
    std::ostream* out_;
};

/// Parses `R <decimal>`; anything else raises TransportError.
Natural parse_response(std::string_view line);

/// Where random fingerprint primes are drawn from, and how hard they are tested.
struct PrimeSource {
    Natural lo{1'000'000'000};
    Natural hi{2'000'000'000};
    std::size_t primality_rounds = 20;

    bool is_default_interval() const;
};

/// Exact number of primes in (10^9, 2*10^9).
inline constexpr std::uint64_t kPrimesInDefaultInterval = 47'374'753;

/// Number of primes in the open interval (lo, hi) by segmented sieve; needs hi <= 10^12
/// and hi - lo <= 2*10^9. The default interval uses the precomputed constant.
std::uint64_t count_primes_in(std::uint64_t lo, std::uint64_t hi);

/// Upper bound on the number of distinct primes above `lo` dividing a
/// nonzero integer below 2^bits: the largest k with (lo + 1)^k < 2^bits.
std::uint64_t max_prime_divisors_above(const Natural& lo, std::uint64_t bits);

enum class Verdict { Match, Mismatch };

struct ResiduePair {
    Natural local;
    Natural remote;
};

struct VerifyReport {
    Verdict verdict = Verdict::Match;
    std::size_t rounds = 0;
    bool length_mismatch = false;
    std::vector<Natural> primes_used;
    std::vector<ResiduePair> residue_pairs;
    /// Structural bound on P(false Match): per_round^rounds where
    /// per_round = max_prime_divisors / primes_in_interval. Absent when the
    /// interval is too large to count.
    std::optional<double> false_positive_bound;
    std::uint64_t max_prime_divisors = 0;
    std::uint64_t primes_in_interval = 0;
};

/// Compares `local` with the oracle's document using `rounds` random primes,
/// stopping at the first unequal pair.
VerifyReport verify(const Document& local, ResidueOracle& remote, std::size_t rounds, Rng& rng,
                    const PrimeSource& primes = {});

struct LocalizeReport {
    std::vector<ByteRange> corrupted;
    std::size_t probes = 0;
    std::size_t queries = 0;
};

/// Binary-search localisation of differing bytes. Each probe compares one
/// sub-range using up to `rounds_per_probe` random primes. Requires equal lengths.
LocalizeReport localize(const Document& local, ResidueOracle& remote, std::size_t rounds_per_probe, Rng& rng,
                        const PrimeSource& primes = {});

}  // namespace randbench::fingerprint
