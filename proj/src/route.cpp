#include "randbench/route.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <fstream>
#include <string>

#include "randbench/errors.hpp"

namespace randbench::route {

namespace {

void check_dimension(unsigned d) {
    if (d < 1 || d > kMaxDimension) {
        throw InvalidArgument("dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
    }
}

struct PacketState {
    Vertex at = 0;
    Vertex intermediate = 0;
    Vertex destination = 0;
    bool second_leg = false;
    bool parked = false;
    bool delivered = false;
    std::uint64_t reached_intermediate = 0;
};

// Synchronous store-and-forward simulation shared by both algorithms.
class Simulator {
public:
    Simulator(unsigned d, const Permutation& perm, const std::vector<Vertex>* sigma, PhaseSync sync,
              const SimOptions& options)
        : d_(d), n_(Vertex{1} << d), sync_(sync), options_(options), queues_(std::size_t{n_} * d) {
        packets_.resize(n_);
        for (Vertex j = 0; j < n_; ++j) {
            auto& p = packets_[j];
            p.at = j;
            p.destination = perm[j];
            p.intermediate = sigma ? (*sigma)[j] : j;
            p.second_leg = sigma == nullptr;
        }
        two_phase_ = sigma != nullptr;
    }

    RunStats run() {
        RunStats stats;
        stats.d = d_;
        stats.per_packet_latency.assign(n_, 0);
        record_routes(stats);

        std::vector<Vertex> movers;
        for (Vertex j = 0; j < n_; ++j) movers.push_back(j);
        settle(movers, 0, stats);

        // Some packet moves every step until all are delivered, so the total hop count bounds the run.
        const std::uint64_t limit = std::uint64_t{n_} * d_ * (two_phase_ ? 2 : 1);
        std::vector<std::uint64_t> edge_stamp(options_.check_edge_capacity ? queues_.size() : 0, 0);
        std::uint64_t now = 0;
        while (remaining_ > 0) {
            if (now >= limit) throw InternalError("routing did not finish within the total hop budget");
            movers.clear();
            for (std::size_t e = 0; e < queues_.size(); ++e) {
                auto& q = queues_[e];
                if (q.empty()) continue;
                if (options_.check_edge_capacity) {
                    if (edge_stamp[e] == now + 1) throw InternalError("edge used twice in one step");
                    edge_stamp[e] = now + 1;
                }
                const Vertex id = q.front();
                q.pop_front();
                const auto dim = static_cast<unsigned>(e % d_);
                packets_[id].at ^= Vertex{1} << dim;
                movers.push_back(id);
            }
            ++now;
            std::sort(movers.begin(), movers.end());
            settle(movers, now, stats);
            if (two_phase_ && sync_ == PhaseSync::Barrier && first_leg_pending_ == 0 && !parked_.empty()) {
                release_parked(now, stats);
            }
        }

        for (Vertex j = 0; j < n_; ++j) {
            stats.total_steps = std::max(stats.total_steps, stats.per_packet_latency[j]);
            if (stats.per_packet_latency[j] < stats.route_hops[j]) {
                throw InternalError("packet delivered faster than its route length");
            }
        }
        return stats;
    }

private:
    Vertex target(const PacketState& p) const { return p.second_leg ? p.destination : p.intermediate; }

    void record_routes(RunStats& stats) {
        stats.vertex_throughput.assign(n_, 0);
        stats.route_hops.assign(n_, 0);
        std::vector<Vertex> visited;
        for (Vertex j = 0; j < n_; ++j) {
            const auto& p = packets_[j];
            visited = leading_bit_path(d_, j, p.intermediate);
            auto second = leading_bit_path(d_, p.intermediate, p.destination);
            stats.route_hops[j] = (visited.size() - 1) + (second.size() - 1);
            visited.insert(visited.end(), second.begin() + 1, second.end());
            std::sort(visited.begin(), visited.end());
            visited.erase(std::unique(visited.begin(), visited.end()), visited.end());
            for (Vertex v : visited) ++stats.vertex_throughput[v];
        }
        for (Vertex v = 0; v < n_; ++v) {
            if (stats.vertex_throughput[v] > stats.busiest_count) {
                stats.busiest_count = stats.vertex_throughput[v];
                stats.busiest_vertex = v;
            }
        }
        remaining_ = n_;
        first_leg_pending_ = two_phase_ ? n_ : 0;
    }

    // Handles packets that have just arrived somewhere at time `now`, in id order.
    void settle(const std::vector<Vertex>& ids, std::uint64_t now, RunStats& stats) {
        for (Vertex id : ids) {
            auto& p = packets_[id];
            if (!p.second_leg && p.at == p.intermediate) {
                p.reached_intermediate = now;
                stats.first_leg_steps = std::max(stats.first_leg_steps, now);
                --first_leg_pending_;
                if (sync_ == PhaseSync::Barrier) {
                    p.parked = true;
                    parked_.push_back(id);
                    continue;
                }
                p.second_leg = true;
            }
            forward(id, now, stats);
        }
        if (two_phase_ && sync_ == PhaseSync::Barrier && first_leg_pending_ == 0 && !parked_.empty() && now == 0) {
            release_parked(now, stats);
        }
    }

    void release_parked(std::uint64_t now, RunStats& stats) {
        std::sort(parked_.begin(), parked_.end());
        auto released = std::move(parked_);
        parked_.clear();
        for (Vertex id : released) {
            auto& p = packets_[id];
            p.parked = false;
            p.second_leg = true;
            p.reached_intermediate = now;
            forward(id, now, stats);
        }
    }

    void forward(Vertex id, std::uint64_t now, RunStats& stats) {
        auto& p = packets_[id];
        if (p.second_leg && p.at == p.destination) {
            p.delivered = true;
            --remaining_;
            stats.per_packet_latency[id] = now;
            if (two_phase_) stats.second_leg_steps = std::max(stats.second_leg_steps, now - p.reached_intermediate);
            return;
        }
        const Vertex next = leading_bit_next(p.at, target(p));
        const auto dim = static_cast<unsigned>(std::countr_zero(next ^ p.at));
        auto& q = queues_[std::size_t{p.at} * d_ + dim];
        q.push_back(id);
        stats.max_queue_depth = std::max<std::uint64_t>(stats.max_queue_depth, q.size());
    }

    unsigned d_;
    Vertex n_;
    PhaseSync sync_;
    SimOptions options_;
    bool two_phase_ = false;
    std::vector<std::deque<Vertex>> queues_;
    std::vector<PacketState> packets_;
    std::vector<Vertex> parked_;
    std::uint64_t remaining_ = 0;
    std::uint64_t first_leg_pending_ = 0;
};

}  // namespace

std::vector<Vertex> leading_bit_path(unsigned d, Vertex src, Vertex dst) {
    check_dimension(d);
    const Vertex n = Vertex{1} << d;
    if (src >= n || dst >= n) throw InvalidArgument("leading_bit_path: vertex out of range");
    std::vector<Vertex> path{src};
    for (Vertex at = src; at != dst;) {
        at = leading_bit_next(at, dst);
        path.push_back(at);
    }
    return path;
}

Permutation identity_permutation(unsigned d) {
    check_dimension(d);
    Permutation perm(std::size_t{1} << d);
    for (Vertex v = 0; v < perm.size(); ++v) perm[v] = v;
    return perm;
}

Permutation bit_reversal(unsigned d) {
    check_dimension(d);
    Permutation perm(std::size_t{1} << d);
    for (Vertex v = 0; v < perm.size(); ++v) {
        Vertex r = 0;
        for (unsigned b = 0; b < d; ++b) {
            if ((v >> b) & 1U) r |= Vertex{1} << (d - 1 - b);
        }
        perm[v] = r;
    }
    return perm;
}

Permutation random_permutation(unsigned d, Rng& rng) {
    Permutation perm = identity_permutation(d);
    for (std::size_t i = perm.size(); i-- > 1;) std::swap(perm[i], perm[rng.uniform_below(i + 1)]);
    return perm;
}

Permutation load_permutation(const std::filesystem::path& path, unsigned d) {
    check_dimension(d);
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open permutation file '" + path.string() + "'");
    Permutation perm;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            const unsigned long long value = std::stoull(token, &used);
            if (used != token.size() || token[0] == '-' || value > UINT32_MAX) throw std::invalid_argument(token);
            perm.push_back(static_cast<Vertex>(value));
        } catch (const std::exception&) {
            throw InvalidArgument("permutation file: bad entry '" + token + "'");
        }
    }
    check_permutation(d, perm);
    return perm;
}

void check_permutation(unsigned d, const Permutation& perm) {
    check_dimension(d);
    const std::size_t n = std::size_t{1} << d;
    if (perm.size() != n) {
        throw InvalidArgument("permutation has " + std::to_string(perm.size()) + " entries, expected " +
                              std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (Vertex v : perm) {
        if (v >= n || seen[v]) throw InvalidArgument("permutation is not a bijection on [0, 2^d)");
        seen[v] = true;
    }
}

RunStats run_oblivious(unsigned d, const Permutation& perm, const SimOptions& options) {
    check_permutation(d, perm);
    return Simulator(d, perm, nullptr, PhaseSync::PerPacket, options).run();
}

RunStats run_two_phase(unsigned d, const Permutation& perm, const std::vector<Vertex>& sigma, PhaseSync sync,
                       const SimOptions& options) {
    check_permutation(d, perm);
    if (sigma.size() != perm.size()) throw InvalidArgument("intermediate mapping has the wrong size");
    for (Vertex v : sigma) {
        if (v >= perm.size()) throw InvalidArgument("intermediate vertex out of range");
    }
    return Simulator(d, perm, &sigma, sync, options).run();
}

RunStats run_valiant(unsigned d, const Permutation& perm, Rng& rng, PhaseSync sync, const SimOptions& options) {
    check_permutation(d, perm);
    std::vector<Vertex> sigma(perm.size());
    for (auto& v : sigma) v = static_cast<Vertex>(rng.uniform_below(perm.size()));
    return run_two_phase(d, perm, sigma, sync, options);
}

}  // namespace randbench::route
