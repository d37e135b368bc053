// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "randbench/factor.hpp"
#include "randbench/fingerprint.hpp"
#include "randbench/mphf.hpp"
#include "randbench/primality.hpp"
#include "randbench/ramsey.hpp"
#include "randbench/rng.hpp"
#include "randbench/route.hpp"

using randbench::Natural;
using randbench::Rng;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Check()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
        c = body();
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!c.pass) ++failures;
    std::printf("%s %2d %-28s %7.2fs  %s\n", c.pass ? "PASS" : "FAIL", id, name.c_str(), secs, c.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

// Splits [0, count) across hardware threads; `body(i)` must be independent per index.
template <typename T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& body) {
    std::vector<T> out(count);
    const std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < count; i += workers) out[i] = body(i);
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

std::vector<bool> eratosthenes(std::size_t limit) {
    std::vector<bool> prime(limit, true);
    for (std::size_t i = 0; i < std::min<std::size_t>(2, limit); ++i) prime[i] = false;
    for (std::size_t i = 2; i * i < limit; ++i) {
        if (!prime[i]) continue;
        for (std::size_t j = i * i; j < limit; j += i) prime[j] = false;
    }
    return prime;
}

Check witness_bound() {
    Check c;
    const auto prime = eratosthenes(5000);
    double worst = 0;
    std::uint64_t worst_n = 0;
    std::size_t checked = 0;
    for (std::uint64_t n = 9; n < 5000; n += 2) {
        if (prime[n]) continue;
        const auto d = randbench::primality::witness_density(n);
        ++checked;
        if (d.value() > worst) worst = d.value(), worst_n = n;
        c.expect(d.below(1, 4), "n=" + std::to_string(n) + " density " + fmt(d.value()));
    }
    if (c.pass) c.detail = std::to_string(checked) + " composites, max density " + fmt(worst) + " at n=" + std::to_string(worst_n);
    return c;
}

Check carmichael() {
    Check c;
    std::size_t composite = 0;
    for (std::uint64_t n : {561ULL, 1729ULL}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(seed);
            const auto v = randbench::primality::is_probable_prime(Natural(n), 10, rng);
            if (v.answer == randbench::primality::Answer::Composite) ++composite;
            else c.expect(false, std::to_string(n) + " seed " + std::to_string(seed));
        }
    }
    if (c.pass) c.detail = std::to_string(composite) + "/200 composite";
    return c;
}

Check sieve_agreement() {
    Check c;
    const auto prime = eratosthenes(10'000);
    Rng rng(0);
    std::size_t primes = 0;
    for (std::uint64_t n = 0; n < 10'000; ++n) {
        const bool says = randbench::primality::is_probable_prime(Natural(n), 20, rng).answer ==
                          randbench::primality::Answer::ProbablyPrime;
        primes += says;
        c.expect(says == prime[n], "n=" + std::to_string(n));
    }
    if (c.pass) c.detail = std::to_string(primes) + " primes below 10^4, all agree";
    return c;
}

Check fingerprint_power() {
    namespace fp = randbench::fingerprint;
    Check c;
    Rng doc_rng(2024);
    std::vector<std::uint8_t> bytes(1024);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(doc_rng.next_u64());
    const fp::Document local(bytes);
    const fp::Document same(bytes);

    const auto matches = parallel_map<int>(10'000, [&](std::size_t i) {
        fp::LocalOracle remote(same);
        Rng rng = randbench::derive_stream(1, i);
        return fp::verify(local, remote, 1, rng).verdict == fp::Verdict::Match ? 1 : 0;
    });
    const int match_count = std::accumulate(matches.begin(), matches.end(), 0);
    c.expect(match_count == 10'000, "equal documents matched " + std::to_string(match_count) + "/10000");

    // Each trial flips one byte at a trial-dependent position to a different value.
    const auto mismatches = parallel_map<int>(100'000, [&](std::size_t i) {
        Rng rng = randbench::derive_stream(2, i);
        auto changed = bytes;
        const auto at = rng.uniform_below(changed.size());
        changed[at] = static_cast<std::uint8_t>(changed[at] ^ (1 + rng.uniform_below(255)));
        const fp::Document other(std::move(changed));
        fp::LocalOracle remote(other);
        return fp::verify(local, remote, 1, rng).verdict == fp::Verdict::Mismatch ? 1 : 0;
    });
    const int mismatch_count = std::accumulate(mismatches.begin(), mismatches.end(), 0);
    c.expect(mismatch_count == 100'000, "differing documents mismatched " + std::to_string(mismatch_count) + "/100000");

    fp::LocalOracle remote(same);
    Rng rng(0);
    const auto report = fp::verify(local, remote, 1, rng);
    if (c.pass) {
        c.detail = "10000/10000 match, 100000/100000 mismatch; per-round bound " +
                   std::to_string(report.max_prime_divisors) + "/" + std::to_string(report.primes_in_interval);
    }
    return c;
}

Check pollard() {
    namespace fa = randbench::factor;
    Check c;
    const auto small = fa::pollard_pm1(Natural(187), 5);
    c.expect(small.divisor == Natural(11), "187 with B=5");
    const auto f5 = fa::pollard_pm1(Natural(4294967297ULL), 128);
    c.expect(f5.divisor == Natural(641), "F5 with B=128");
    const Natural f11 = Natural::power_of_two(2048) + Natural(1);
    const auto big = fa::pollard_pm1(f11, 8192);
    c.expect(big.divisor.has_value() && (*big.divisor % Natural(319489)).is_zero() && *big.divisor != f11,
             "F11 with B=8192");
    if (c.pass) c.detail = "187 -> 11, F5 -> 641, F11 -> " + big.divisor->to_decimal();
    return c;
}

std::uint64_t smallest_factor(std::uint64_t n) {
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) return p;
    }
    return n;
}

Check ecm() {
    namespace fa = randbench::factor;
    Check c;
    Rng pick(6);
    std::vector<std::uint64_t> semiprimes;
    // Sampled within the operation's domain: coprime to 6 and not a square.
    while (semiprimes.size() < 100) {
        const std::uint64_t n = (1ULL << 19) + pick.uniform_below(1ULL << 19) | 1ULL;
        const auto p = smallest_factor(n);
        if (p == n || p <= 3) continue;
        const auto q = n / p;
        if (q == p || smallest_factor(q) != q) continue;
        semiprimes.push_back(n);
    }
    Rng rng(6);
    std::size_t found = 0;
    std::size_t curves = 0;
    for (auto n : semiprimes) {
        const auto out = fa::ecm_stage1(Natural(n), 1000, 200, rng);
        curves += out.curves_tried;
        if (!out.divisor) continue;
        const auto d = out.divisor->to_u64();
        if (d && *d > 1 && *d < n && n % *d == 0) ++found;
        else c.expect(false, "bad divisor for " + std::to_string(n));
    }
    c.expect(found >= 99, "factored " + std::to_string(found) + "/100");

    std::size_t curve_count = 0;
    for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL}) {
        for (std::uint64_t a = 0; a < p; ++a) {
            for (std::uint64_t b = 0; b < p; ++b) {
                if ((4 * a * a * a + 27 * b * b) % p == 0) continue;
                const auto points = static_cast<std::int64_t>(fa::count_points(a, b, p));
                const auto offset = points - static_cast<std::int64_t>(p + 1);
                ++curve_count;
                c.expect(offset * offset <= static_cast<std::int64_t>(4 * p),
                         "Hasse fails for p=" + std::to_string(p) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
            }
        }
    }
    if (c.pass) {
        c.detail = std::to_string(found) + "/100 factored (" + std::to_string(curves) + " curves), " +
                   std::to_string(curve_count) + " curves in Hasse window";
    }
    return c;
}

std::vector<std::string> distinct_words(Rng& rng, std::size_t count) {
    std::set<std::string> seen;
    std::vector<std::string> words;
    while (words.size() < count) {
        std::string w(4 + rng.uniform_below(9), 'a');
        for (auto& ch : w) ch = static_cast<char>('a' + rng.uniform_below(26));
        if (seen.insert(w).second) words.push_back(std::move(w));
    }
    return words;
}

Check chm() {
    namespace mp = randbench::mphf;
    Check c;
    Rng word_rng(7);
    const mp::WordSet words(distinct_words(word_rng, 10'000));

    Rng rng(7);
    const auto [f, report] = mp::build(words, rng);
    std::vector<bool> hit(words.size(), false);
    bool ordered = true;
    for (std::size_t j = 0; j < words.size(); ++j) {
        const auto v = f(words[j]);
        ordered = ordered && v == j;
        if (v < hit.size()) hit[v] = true;
    }
    c.expect(ordered, "not ordered");
    c.expect(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }), "not onto");

    const auto bytes = mp::serialize(f);
    c.expect(mp::deserialize(bytes) == f && mp::serialize(mp::deserialize(bytes)) == bytes, "round trip");

    const auto trials = parallel_map<std::size_t>(200, [&](std::size_t i) {
        Rng r = randbench::derive_stream(7, i);
        return mp::build(words, r).second.trials;
    });
    const double mean = static_cast<double>(std::accumulate(trials.begin(), trials.end(), std::size_t{0})) / 200.0;
    c.expect(mean >= 1.4 && mean <= 2.1, "mean trials " + fmt(mean));

    // Averaging several builds per size smooths out the geometric number of trials.
    const auto timed = [](const mp::WordSet& ws, std::uint64_t seed) {
        double total = 0;
        for (std::uint64_t i = 0; i < 8; ++i) {
            Rng r = randbench::derive_stream(seed, i);
            const auto start = std::chrono::steady_clock::now();
            mp::build(ws, r);
            total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
        return total;
    };
    Rng small_rng(13);
    Rng large_rng(16);
    const mp::WordSet small(distinct_words(small_rng, 1U << 13));
    const mp::WordSet large(distinct_words(large_rng, 1U << 16));
    timed(small, 99);
    const double ratio = timed(large, 8) / timed(small, 8);
    c.expect(ratio <= 16.0, "time ratio " + fmt(ratio));
    if (c.pass) {
        c.detail = "bijective and ordered, round trip exact, mean trials " + fmt(mean) + ", time ratio 2^16/2^13 " +
                   fmt(ratio, 3);
    }
    return c;
}

Check congestion() {
    namespace rt = randbench::route;
    Check c;
    std::string counts;
    for (unsigned d : {4U, 6U, 8U, 10U}) {
        const auto stats = rt::run_oblivious(d, rt::bit_reversal(d));
        const auto through = stats.vertex_throughput.at(0);
        c.expect(through >= (1ULL << (d / 2)), "d=" + std::to_string(d) + " vertex 0 carries " + std::to_string(through));
        counts += (counts.empty() ? "" : ", ") + std::string("d=") + std::to_string(d) + ": " + std::to_string(through);
    }
    if (c.pass) c.detail = "vertex 0 throughput " + counts;
    return c;
}

Check valiant() {
    namespace rt = randbench::route;
    Check c;
    std::string summary;
    for (unsigned d : {6U, 8U}) {
        const auto perm = rt::bit_reversal(d);
        const auto steps = parallel_map<std::uint64_t>(200, [&](std::size_t i) {
            Rng rng = randbench::derive_stream(i, 0);
            return rt::run_valiant(d, perm, rng).total_steps;
        });
        const auto within = std::count_if(steps.begin(), steps.end(), [&](auto s) { return s <= 14 * d; });
        const double mean = static_cast<double>(std::accumulate(steps.begin(), steps.end(), std::uint64_t{0})) / 200.0;
        c.expect(within >= 198, "d=" + std::to_string(d) + " within 14d " + std::to_string(within) + "/200");
        c.expect(mean < 15.0 * d, "d=" + std::to_string(d) + " mean " + fmt(mean));
        summary += (summary.empty() ? "" : "; ") + std::string("d=") + std::to_string(d) + " within 14d " +
                   std::to_string(within) + "/200, mean " + fmt(mean) + ", max " +
                   std::to_string(*std::max_element(steps.begin(), steps.end()));
    }
    if (c.pass) c.detail = summary;
    return c;
}

Check ramsey_small() {
    namespace rm = randbench::ramsey;
    Check c;
    const auto five = rm::exhaustive_search(5, 3, 3);
    c.expect(!five.empty(), "no (3,3,5)-graph found");
    c.expect(rm::exhaustive_search(6, 3, 3).empty(), "(3,3,6)-graph found");

    std::size_t small_ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto r = rm::anneal(5, 3, 3, rm::AnnealConfig{}, rng);
        if (r.found() && rm::count_violations(*r.graph, 3, 3) == 0) ++small_ok;
    }
    c.expect(small_ok == 20, "anneal(5,3,3) " + std::to_string(small_ok) + "/20");

    Rng rng(0);
    const auto big = rm::anneal(17, 4, 4, rm::AnnealConfig{}, rng);
    c.expect(big.found() && big.total_steps <= 10'000'000 && rm::count_violations(*big.graph, 4, 4) == 0,
             "anneal(17,4,4) failed after " + std::to_string(big.total_steps) + " steps");
    if (c.pass) {
        c.detail = std::to_string(five.size()) + " labeled (3,3,5)-graphs, none on 6 vertices, 20/20 anneals, (4,4,17) in " +
                   std::to_string(big.total_steps) + " steps";
    }
    return c;
}

Check census_formula() {
    Check c;
    const double p = randbench::ramsey::census_confidence(328, 5812);
    c.expect(p >= 0.99999997 && p <= 0.99999999, "confidence " + fmt(p, 12));
    if (c.pass) c.detail = "confidence " + fmt(p, 12);
    return c;
}

// Runs the installed CLI binary and captures stdout.
std::pair<int, std::string> run_cli(const std::string& args) {
    const std::string command = std::string(RANDBENCH_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot start " + command);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = ::pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Check determinism() {
    Check c;
    const fs::path dir = fs::temp_directory_path() / ("randbench_accept_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir / "graphs");
    std::string doc(4096, 'a');
    for (std::size_t i = 0; i < doc.size(); ++i) doc[i] = static_cast<char>('a' + (i * 7 + i / 13) % 26);
    std::ofstream(dir / "a.txt", std::ios::binary) << doc;
    doc[3000] = '#';
    std::ofstream(dir / "b.txt", std::ios::binary) << doc;
    {
        Rng rng(5);
        std::ofstream words(dir / "words.txt");
        for (const auto& w : distinct_words(rng, 2000)) words << w << '\n';
    }
    const std::string d = dir.string();

    // Each entry: arguments, plus an optional file whose bytes must also repeat.
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"--seed 11 prime test 2^89-1", ""},
        {"--seed 11 --trials 8 prime test 561 --rounds 1", ""},
        {"--seed 11 prime random --lo 10^30 --hi 10^31", ""},
        {"--seed 11 fingerprint verify " + d + "/a.txt --remote " + d + "/b.txt --rounds 3", ""},
        {"--seed 11 fingerprint localize " + d + "/a.txt --remote " + d + "/b.txt", ""},
        {"--seed 11 factor ecm 1000003*1000033 --b1 2000", ""},
        {"--seed 11 --trials 6 factor ecm 2761103 --b1 200", ""},
        {"--seed 11 mphf build " + d + "/words.txt -o " + d + "/fn.chm", d + "/fn.chm"},
        {"--seed 11 route sim --d 7 --perm random --algo greedy", ""},
        {"--seed 11 --trials 10 route sim --d 6 --perm bitrev --algo valiant --sync barrier", ""},
        {"--seed 11 ramsey anneal --n 12 --s 4 --t 4 --output " + d + "/graphs/g.txt", d + "/graphs/g.txt"},
    };
    std::size_t compared = 0;
    for (const auto& [args, artifact] : commands) {
        std::array<std::string, 2> results;
        std::array<std::string, 2> manifests;
        std::array<std::string, 2> files;
        for (int rep = 0; rep < 2; ++rep) {
            const auto [code, out] = run_cli(args);
            auto json = nlohmann::ordered_json::parse(out);
            for (const char* key : {"started_at", "finished_at", "elapsed_us"}) json["manifest"].erase(key);
            manifests[rep] = json["manifest"].dump();
            results[rep] = json["result"].dump();
            if (!artifact.empty()) files[rep] = read_all(artifact);
            (void)code;
        }
        c.expect(manifests[0] == manifests[1], "manifest differs: " + args);
        c.expect(results[0] == results[1], "result differs: " + args);
        c.expect(files[0] == files[1], "output file differs: " + args);
        ++compared;
    }
    fs::remove_all(dir);
    if (c.pass) c.detail = std::to_string(compared) + " randomized invocations repeat byte for byte";
    return c;
}

}  // namespace

int main() {
    criterion(1, "witness density < 1/4", witness_bound);
    criterion(2, "Carmichael numbers", carmichael);
    criterion(3, "sieve agreement", sieve_agreement);
    criterion(4, "fingerprint power", fingerprint_power);
    criterion(5, "Pollard p-1", pollard);
    criterion(6, "ECM and Hasse window", ecm);
    criterion(7, "CHM perfect hash", chm);
    criterion(8, "bit-reversal congestion", congestion);
    criterion(9, "two-phase routing", valiant);
    criterion(10, "small Ramsey cases", ramsey_small);
    criterion(11, "census confidence", census_formula);
    criterion(12, "CLI determinism", determinism);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
