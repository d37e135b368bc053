#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "randbench/rng.hpp"

namespace randbench::route {

/// Vertex label of a d-cube. Bit d-1 is the leading (most significant) bit b0.
using Vertex = std::uint32_t;
using Permutation = std::vector<Vertex>;

inline constexpr unsigned kMaxDimension = 20;

/// Vertices visited by flipping the highest differing bit first; Hamming(src, dst) + 1 entries.
std::vector<Vertex> leading_bit_path(unsigned d, Vertex src, Vertex dst);

/// The next hop from `at` toward `dst`, or `at` itself when they are equal.
constexpr Vertex leading_bit_next(Vertex at, Vertex dst) noexcept {
    const Vertex diff = at ^ dst;
    if (diff == 0) return at;
    Vertex top = diff;
    top |= top >> 1;
    top |= top >> 2;
    top |= top >> 4;
    top |= top >> 8;
    top |= top >> 16;
    return at ^ (top ^ (top >> 1));
}

Permutation identity_permutation(unsigned d);
/// v -> v with its d bits reversed.
Permutation bit_reversal(unsigned d);
Permutation random_permutation(unsigned d, Rng& rng);
/// N lines of destination indices.
Permutation load_permutation(const std::filesystem::path& path, unsigned d);

/// Throws InvalidArgument unless `perm` is a bijection on [0, 2^d).
void check_permutation(unsigned d, const Permutation& perm);

enum class PhaseSync {
    /// Each packet turns toward its destination as soon as it reaches its intermediate vertex.
    PerPacket,
    /// No packet starts the second leg until every packet has reached its intermediate vertex.
    Barrier,
};

struct SimOptions {
    /// Audit unit edge capacity every step.
    bool check_edge_capacity = true;
};

struct RunStats {
    unsigned d = 0;
    std::uint64_t total_steps = 0;
    /// Vertex crossed by the most packets (endpoints included), lowest index on ties.
    Vertex busiest_vertex = 0;
    std::uint64_t busiest_count = 0;
    /// Number of distinct packets whose route includes each vertex.
    std::vector<std::uint64_t> vertex_throughput;
    /// Delivery step of each packet, indexed by packet id.
    std::vector<std::uint64_t> per_packet_latency;
    /// Edge hops on each packet's route.
    std::vector<std::uint64_t> route_hops;
    std::uint64_t max_queue_depth = 0;
    /// Latest arrival at an intermediate vertex (two-phase runs only).
    std::uint64_t first_leg_steps = 0;
    /// Longest time any packet spent after leaving its intermediate vertex (two-phase runs only).
    std::uint64_t second_leg_steps = 0;
};

/// Greedy leading-bit routing of packet j from j to perm[j]. One FIFO queue
/// per directed edge, one packet per edge per step, simultaneous arrivals
/// queued by ascending packet id.
RunStats run_oblivious(unsigned d, const Permutation& perm, const SimOptions& options = {});

/// Two-phase randomized routing: j -> sigma(j) -> perm[j] with sigma drawn as
/// N independent uniform vertices, both legs by leading-bit routing.
RunStats run_valiant(unsigned d, const Permutation& perm, Rng& rng, PhaseSync sync = PhaseSync::PerPacket,
                     const SimOptions& options = {});

/// run_valiant with a caller-supplied intermediate mapping.
RunStats run_two_phase(unsigned d, const Permutation& perm, const std::vector<Vertex>& sigma, PhaseSync sync,
                       const SimOptions& options = {});

}  // namespace randbench::route
