#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "randbench/rng.hpp"

namespace randbench::mphf {

/// Ordered set of distinct keys (arbitrary byte strings).
///
/// Keys are hashed over a fixed width L with missing trailing positions read
/// as byte 0, so two keys that differ only by trailing NUL bytes are rejected.
class WordSet {
public:
    explicit WordSet(std::vector<std::string> words);

    std::size_t size() const noexcept { return words_.size(); }
    const std::string& operator[](std::size_t i) const { return words_[i]; }
    const std::vector<std::string>& words() const noexcept { return words_; }
    /// Hash width: the longest key length, at least 1.
    std::size_t width() const noexcept { return width_; }

private:
    std::vector<std::string> words_;
    std::size_t width_ = 1;
};

struct Edge {
    std::uint64_t u = 0;
    std::uint64_t v = 0;
};

/// h(w) = (g[f1(w)] + g[f2(w)]) mod m, where fi(w) = sum_j Ti[j][w_j] mod n.
class PerfectHash {
public:
    PerfectHash(std::uint64_t m, std::uint64_t n, std::uint64_t width, std::vector<std::uint64_t> t1,
                std::vector<std::uint64_t> t2, std::vector<std::uint64_t> g);

    std::uint64_t key_count() const noexcept { return m_; }
    std::uint64_t vertex_count() const noexcept { return n_; }
    std::uint64_t width() const noexcept { return width_; }
    const std::vector<std::uint64_t>& table1() const noexcept { return t1_; }
    const std::vector<std::uint64_t>& table2() const noexcept { return t2_; }
    const std::vector<std::uint64_t>& g() const noexcept { return g_; }

    /// The graph edge (f1(w), f2(w)). Throws OutOfDomain if w is longer than width().
    Edge edge(std::string_view word) const;
    /// Hash value in [0, m). Build keys map to their index; other inputs map somewhere in range.
    std::uint64_t operator()(std::string_view word) const;

    friend bool operator==(const PerfectHash&, const PerfectHash&) = default;

private:
    std::uint64_t m_;
    std::uint64_t n_;
    std::uint64_t width_;
    std::vector<std::uint64_t> t1_;
    std::vector<std::uint64_t> t2_;
    std::vector<std::uint64_t> g_;
};

struct BuildOptions {
    /// n = ceil(ratio * m); must exceed 2.
    double ratio = 3.0;
    std::size_t max_trials = 1000;
};

struct BuildReport {
    std::size_t trials = 0;
    /// Generator state when the build started; replaying from it reproduces the function.
    std::uint64_t seed = 0;
    std::chrono::nanoseconds elapsed{0};
};

/// Randomized construction: redraw the tables until the key graph is a forest
/// with m distinct edges, then assign g along the forest so that h(w_j) = j.
/// Throws InvalidArgument for ratio <= 2 and BudgetExhausted after max_trials rejections.
std::pair<PerfectHash, BuildReport> build(const WordSet& words, Rng& rng, const BuildOptions& options = {});

/// True iff the multigraph on vertices [0, n) has no cycle; self-loops and
/// repeated edges count as cycles.
bool is_acyclic(std::uint64_t n, std::span<const Edge> edges);

/// Little-endian: "CHM1", version 0x01, m, n, L (u64 each), T1 (L*256 u64), T2, g (n u64).
std::vector<std::uint8_t> serialize(const PerfectHash& f);
/// Inverse of serialize; throws FormatError with the failing byte offset.
PerfectHash deserialize(std::span<const std::uint8_t> bytes);

}  // namespace randbench::mphf
