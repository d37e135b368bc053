#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randbench/rng.hpp"

namespace randbench::ramsey {

inline constexpr unsigned kMaxGraphVertices = 32;
/// Largest n accepted by the exact violation counter and the annealer.
inline constexpr unsigned kMaxSearchVertices = 24;
/// Largest n for exhaustive enumeration (C(n,2) <= 21).
inline constexpr unsigned kMaxExhaustiveVertices = 7;
/// Largest n for exact canonical forms (brute force over relabelings).
inline constexpr unsigned kMaxCanonicalVertices = 10;

/// Simple undirected graph on n <= 32 vertices as symmetric adjacency bit rows.
class Graph {
public:
    explicit Graph(unsigned n);

    static Graph cycle(unsigned n);
    static Graph complete(unsigned n);

    unsigned order() const noexcept { return n_; }
    bool has_edge(unsigned i, unsigned j) const noexcept { return (rows_[i] >> j) & 1U; }
    void set_edge(unsigned i, unsigned j, bool present);
    void flip_edge(unsigned i, unsigned j);
    std::uint32_t row(unsigned i) const noexcept { return rows_[i]; }
    std::size_t edge_count() const noexcept;
    Graph complement() const;
    /// Graph with vertex i of the result being vertex perm[i] of this one.
    Graph relabeled(std::span<const unsigned> perm) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    unsigned n_;
    std::vector<std::uint32_t> rows_;
};

/// Number of k-subsets of `candidates` that are cliques in the graph given by `rows`.
std::uint64_t count_cliques(std::span<const std::uint32_t> rows, std::uint32_t candidates, unsigned k);

/// s-cliques plus independent t-sets, counted exactly. Requires 2 <= s, t <= n <= 24.
std::uint64_t count_violations(const Graph& g, unsigned s, unsigned t);

struct AnnealConfig {
    /// Starting temperature; when absent, the mean |delta| over 100 random moves.
    std::optional<double> initial_temperature;
    double cooling = 0.995;
    /// Moves per temperature level; when absent, 100 * C(n, 2).
    std::optional<std::uint64_t> steps_per_temperature;
    std::uint64_t max_total_steps = 10'000'000;
    /// Restarts allowed after the first run (each from a fresh random graph).
    std::uint64_t restarts = 1'000'000;
    /// Restart after this many consecutive moves without an accepted energy-lowering move.
    std::uint64_t stall_limit = 100'000;
    /// Cross-check the incremental energy against a full recount every 1000 moves.
    bool audit_energy = false;

    void validate() const;
};

struct AnnealResult {
    std::optional<Graph> graph;
    std::uint64_t total_steps = 0;
    std::uint64_t restarts_used = 0;
    std::uint64_t best_energy = 0;
    bool found() const noexcept { return graph.has_value(); }
};

/// Simulated annealing over single edge flips toward a graph with no s-clique
/// and no independent t-set. A returned graph has been re-verified by
/// count_violations.
AnnealResult anneal(unsigned n, unsigned s, unsigned t, const AnnealConfig& config, Rng& rng);

/// Every labeled graph on n vertices with no violations. Requires n <= 7.
std::vector<Graph> exhaustive_search(unsigned n, unsigned s, unsigned t);

/// Probability that r uniform draws from c + 1 equally likely solutions would
/// have hit an unseen one: 1 - (c / (c + 1))^r. Requires 1 <= c <= r.
double census_confidence(std::uint64_t distinct_found, std::uint64_t total_runs);

/// Isomorphism- and complement-invariant byte key for n <= 10; above that,
/// the labeled graph paired with its complement (not isomorphism-invariant).
std::vector<std::uint8_t> canonical_form(const Graph& g);

struct Census {
    std::uint64_t runs = 0;
    std::uint64_t distinct = 0;
    double confidence = 0.0;
    /// False when some graph exceeded the exact canonicalisation limit.
    bool isomorphism_classes = true;
};

Census census(std::span<const Graph> graphs);

/// Adjacency-list text: a line `n <N>` then `i: j k ...` per vertex; `#` starts a comment.
std::string format_graph(const Graph& g);
Graph parse_graph(std::istream& in);

}  // namespace randbench::ramsey
