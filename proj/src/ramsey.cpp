#include "randbench/ramsey.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "randbench/errors.hpp"

namespace randbench::ramsey {

namespace {

std::uint32_t full_mask(unsigned n) { return n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1; }

void check_parameters(unsigned n, unsigned s, unsigned t) {
    if (s < 2 || t < 2 || s > n || t > n || n > kMaxSearchVertices) {
        throw InvalidArgument("need 2 <= s, t <= n <= " + std::to_string(kMaxSearchVertices) + " (got n=" +
                              std::to_string(n) + ", s=" + std::to_string(s) + ", t=" + std::to_string(t) + ")");
    }
}

std::vector<std::uint32_t> complement_rows(const Graph& g) {
    std::vector<std::uint32_t> rows(g.order());
    const std::uint32_t full = full_mask(g.order());
    for (unsigned i = 0; i < g.order(); ++i) rows[i] = ~g.row(i) & full & ~(std::uint32_t{1} << i);
    return rows;
}

// Incrementally maintained energy for the annealer.
class EnergyState {
public:
    EnergyState(Graph g, unsigned s, unsigned t) : g_(std::move(g)), s_(s), t_(t), comp_(complement_rows(g_)) {
        energy_ = count_violations(g_, s_, t_);
    }

    std::uint64_t energy() const noexcept { return energy_; }
    const Graph& graph() const noexcept { return g_; }

    // Change in violations if edge {u, v} were flipped. Only subsets containing
    // both u and v change status.
    std::int64_t delta(unsigned u, unsigned v) const {
        const std::uint32_t others = ~((std::uint32_t{1} << u) | (std::uint32_t{1} << v));
        const std::uint32_t common_adjacent = g_.row(u) & g_.row(v) & others;
        const std::uint32_t common_non_adjacent = comp_[u] & comp_[v] & others;
        const auto cliques = static_cast<std::int64_t>(count_cliques(rows_view(), common_adjacent, s_ - 2));
        const auto independents = static_cast<std::int64_t>(count_cliques(comp_, common_non_adjacent, t_ - 2));
        return g_.has_edge(u, v) ? independents - cliques : cliques - independents;
    }

    void flip(unsigned u, unsigned v, std::int64_t delta) {
        g_.flip_edge(u, v);
        comp_[u] ^= std::uint32_t{1} << v;
        comp_[v] ^= std::uint32_t{1} << u;
        energy_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(energy_) + delta);
    }

private:
    std::span<const std::uint32_t> rows_view() const {
        rows_.resize(g_.order());
        for (unsigned i = 0; i < g_.order(); ++i) rows_[i] = g_.row(i);
        return rows_;
    }

    Graph g_;
    unsigned s_;
    unsigned t_;
    std::vector<std::uint32_t> comp_;
    mutable std::vector<std::uint32_t> rows_;
    std::uint64_t energy_ = 0;
};

Graph random_graph(unsigned n, Rng& rng) {
    Graph g(n);
    std::uint64_t bits = 0;
    unsigned available = 0;
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = i + 1; j < n; ++j) {
            if (available == 0) {
                bits = rng.next_u64();
                available = 64;
            }
            g.set_edge(i, j, bits & 1U);
            bits >>= 1;
            --available;
        }
    }
    return g;
}

// Column-major upper-triangle bits of g relabeled by `perm`, minimised over
// all relabelings by branch and bound on the bit prefix.
class Canonicalizer {
public:
    explicit Canonicalizer(const Graph& g) : g_(g), n_(g.order()), total_bits_(n_ * (n_ - 1) / 2) {}

    std::uint64_t minimum() {
        perm_.assign(n_, 0);
        used_.assign(n_, false);
        search(0, 0, 0);
        return best_;
    }

private:
    void search(unsigned position, std::uint64_t prefix, unsigned bits) {
        if (have_best_ && prefix > (best_ >> (total_bits_ - bits))) return;
        if (position == n_) {
            if (!have_best_ || prefix < best_) {
                best_ = prefix;
                have_best_ = true;
            }
            return;
        }
        for (unsigned v = 0; v < n_; ++v) {
            if (used_[v]) continue;
            used_[v] = true;
            perm_[position] = v;
            std::uint64_t extended = prefix;
            for (unsigned i = 0; i < position; ++i) extended = (extended << 1) | (g_.has_edge(perm_[i], v) ? 1U : 0U);
            search(position + 1, extended, bits + position);
            used_[v] = false;
        }
    }

    const Graph& g_;
    unsigned n_;
    unsigned total_bits_;
    std::vector<unsigned> perm_;
    std::vector<bool> used_;
    std::uint64_t best_ = 0;
    bool have_best_ = false;
};

std::vector<std::uint8_t> pack(unsigned n, const std::vector<bool>& bits) {
    std::vector<std::uint8_t> out{static_cast<std::uint8_t>(n)};
    out.resize(1 + (bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) out[1 + i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
    }
    return out;
}

std::vector<bool> column_major_bits(const Graph& g) {
    std::vector<bool> bits;
    for (unsigned j = 1; j < g.order(); ++j) {
        for (unsigned i = 0; i < j; ++i) bits.push_back(g.has_edge(i, j));
    }
    return bits;
}

}  // namespace

Graph::Graph(unsigned n) : n_(n), rows_(n, 0) {
    if (n > kMaxGraphVertices) throw InvalidArgument("graph order exceeds " + std::to_string(kMaxGraphVertices));
}

Graph Graph::cycle(unsigned n) {
    Graph g(n);
    for (unsigned i = 0; n >= 3 && i < n; ++i) g.set_edge(i, (i + 1) % n, true);
    return g;
}

Graph Graph::complete(unsigned n) { return Graph(n).complement(); }

void Graph::set_edge(unsigned i, unsigned j, bool present) {
    if (i >= n_ || j >= n_ || i == j) throw InvalidArgument("set_edge: invalid vertex pair");
    if (present) {
        rows_[i] |= std::uint32_t{1} << j;
        rows_[j] |= std::uint32_t{1} << i;
    } else {
        rows_[i] &= ~(std::uint32_t{1} << j);
        rows_[j] &= ~(std::uint32_t{1} << i);
    }
}

void Graph::flip_edge(unsigned i, unsigned j) { set_edge(i, j, !has_edge(i, j)); }

std::size_t Graph::edge_count() const noexcept {
    std::size_t twice = 0;
    for (auto r : rows_) twice += static_cast<std::size_t>(std::popcount(r));
    return twice / 2;
}

Graph Graph::complement() const {
    Graph c(n_);
    const std::uint32_t full = full_mask(n_);
    for (unsigned i = 0; i < n_; ++i) c.rows_[i] = ~rows_[i] & full & ~(std::uint32_t{1} << i);
    return c;
}

Graph Graph::relabeled(std::span<const unsigned> perm) const {
    if (perm.size() != n_) throw InvalidArgument("relabeled: permutation size mismatch");
    Graph h(n_);
    for (unsigned i = 0; i < n_; ++i) {
        for (unsigned j = i + 1; j < n_; ++j) {
            if (has_edge(perm[i], perm[j])) h.set_edge(i, j, true);
        }
    }
    return h;
}

std::uint64_t count_cliques(std::span<const std::uint32_t> rows, std::uint32_t candidates, unsigned k) {
    if (k == 0) return 1;
    if (static_cast<unsigned>(std::popcount(candidates)) < k) return 0;
    if (k == 1) return static_cast<std::uint64_t>(std::popcount(candidates));
    std::uint64_t total = 0;
    while (candidates != 0) {
        const auto v = static_cast<unsigned>(std::countr_zero(candidates));
        candidates &= candidates - 1;
        // Extend only with higher-numbered candidates so each subset is counted once.
        total += count_cliques(rows, candidates & rows[v], k - 1);
    }
    return total;
}

std::uint64_t count_violations(const Graph& g, unsigned s, unsigned t) {
    check_parameters(g.order(), s, t);
    std::vector<std::uint32_t> rows(g.order());
    for (unsigned i = 0; i < g.order(); ++i) rows[i] = g.row(i);
    const std::uint32_t all = full_mask(g.order());
    return count_cliques(rows, all, s) + count_cliques(complement_rows(g), all, t);
}

void AnnealConfig::validate() const {
    if (initial_temperature && !(*initial_temperature > 0.0)) {
        throw InvalidArgument("anneal: initial temperature must be positive");
    }
    if (!(cooling > 0.0 && cooling < 1.0)) throw InvalidArgument("anneal: cooling must lie in (0, 1)");
    if (steps_per_temperature && *steps_per_temperature == 0) {
        throw InvalidArgument("anneal: steps per temperature must be positive");
    }
    if (max_total_steps == 0) throw InvalidArgument("anneal: max_total_steps must be positive");
    if (stall_limit == 0) throw InvalidArgument("anneal: stall_limit must be positive");
}

AnnealResult anneal(unsigned n, unsigned s, unsigned t, const AnnealConfig& config, Rng& rng) {
    check_parameters(n, s, t);
    config.validate();

    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    const std::uint64_t block = config.steps_per_temperature.value_or(100 * pairs.size());

    AnnealResult result;
    result.best_energy = UINT64_MAX;
    for (std::uint64_t attempt = 0; attempt <= config.restarts && result.total_steps < config.max_total_steps;
         ++attempt) {
        result.restarts_used = attempt;
        EnergyState state(random_graph(n, rng), s, t);
        result.best_energy = std::min(result.best_energy, state.energy());
        if (state.energy() == 0) {
            result.graph = state.graph();
            return result;
        }

        double temperature = 0.0;
        if (config.initial_temperature) {
            temperature = *config.initial_temperature;
        } else {
            double sum = 0.0;
            for (int i = 0; i < 100; ++i) {
                const auto& [u, v] = pairs[rng.uniform_below(pairs.size())];
                sum += std::abs(static_cast<double>(state.delta(u, v)));
            }
            temperature = sum > 0.0 ? sum / 100.0 : 1.0;
        }

        std::uint64_t since_improvement = 0;
        std::uint64_t in_block = 0;
        while (result.total_steps < config.max_total_steps) {
            const auto& [u, v] = pairs[rng.uniform_below(pairs.size())];
            const std::int64_t d = state.delta(u, v);
            const bool accepted = d <= 0 || rng.uniform_unit() < std::exp(-static_cast<double>(d) / temperature);
            if (accepted) state.flip(u, v, d);
            ++result.total_steps;

            if (config.audit_energy && result.total_steps % 1000 == 0 &&
                state.energy() != count_violations(state.graph(), s, t)) {
                throw InternalError("anneal: incremental energy diverged from recount");
            }
            if (state.energy() == 0) {
                if (count_violations(state.graph(), s, t) != 0) {
                    throw InternalError("anneal: zero incremental energy but violations remain");
                }
                result.best_energy = 0;
                result.graph = state.graph();
                return result;
            }
            result.best_energy = std::min(result.best_energy, state.energy());
            // A run is frozen once no energy-lowering move has been accepted for stall_limit moves.
            if (accepted && d < 0) {
                since_improvement = 0;
            } else if (++since_improvement >= config.stall_limit) {
                break;
            }
            if (++in_block == block) {
                temperature *= config.cooling;
                in_block = 0;
            }
        }
    }
    return result;
}

std::vector<Graph> exhaustive_search(unsigned n, unsigned s, unsigned t) {
    if (n > kMaxExhaustiveVertices) {
        throw InvalidArgument("exhaustive_search: n = " + std::to_string(n) +
                              " exceeds 7 (2^21 graphs); use anneal for larger n");
    }
    check_parameters(n, s, t);
    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    std::vector<Graph> found;
    const std::uint64_t graphs = std::uint64_t{1} << pairs.size();
    for (std::uint64_t mask = 0; mask < graphs; ++mask) {
        Graph g(n);
        for (std::size_t e = 0; e < pairs.size(); ++e) {
            if ((mask >> e) & 1U) g.set_edge(pairs[e].first, pairs[e].second, true);
        }
        if (count_violations(g, s, t) == 0) found.push_back(std::move(g));
    }
    return found;
}

double census_confidence(std::uint64_t distinct_found, std::uint64_t total_runs) {
    if (total_runs == 0 || distinct_found == 0) throw InvalidArgument("census_confidence: need c >= 1 and r >= 1");
    if (distinct_found > total_runs) throw InvalidArgument("census_confidence: c cannot exceed r");
    const double c = static_cast<double>(distinct_found);
    const double r = static_cast<double>(total_runs);
    // 1 - (c/(c+1))^r = -expm1(r * log1p(-1/(c+1))), stable when the result is near 1.
    return -std::expm1(r * std::log1p(-1.0 / (c + 1.0)));
}

std::vector<std::uint8_t> canonical_form(const Graph& g) {
    const unsigned n = g.order();
    if (n <= kMaxCanonicalVertices) {
        const unsigned bits = n * (n - (n > 0 ? 1 : 0)) / 2;
        const std::uint64_t key = std::min(Canonicalizer(g).minimum(), Canonicalizer(g.complement()).minimum());
        std::vector<bool> v(bits);
        for (unsigned i = 0; i < bits; ++i) v[i] = (key >> (bits - 1 - i)) & 1U;
        return pack(n, v);
    }
    auto own = pack(n, column_major_bits(g));
    auto other = pack(n, column_major_bits(g.complement()));
    return std::min(own, other);
}

Census census(std::span<const Graph> graphs) {
    Census c;
    std::set<std::vector<std::uint8_t>> forms;
    for (const auto& g : graphs) {
        forms.insert(canonical_form(g));
        if (g.order() > kMaxCanonicalVertices) c.isomorphism_classes = false;
    }
    c.runs = graphs.size();
    c.distinct = forms.size();
    if (c.runs > 0) c.confidence = census_confidence(c.distinct, c.runs);
    return c;
}

std::string format_graph(const Graph& g) {
    std::ostringstream out;
    out << "n " << g.order() << '\n';
    for (unsigned i = 0; i < g.order(); ++i) {
        out << i << ':';
        for (unsigned j = 0; j < g.order(); ++j) {
            if (g.has_edge(i, j)) out << ' ' << j;
        }
        out << '\n';
    }
    return out.str();
}

Graph parse_graph(std::istream& in) {
    std::string line;
    std::optional<Graph> g;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw InvalidArgument("graph text line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string head;
        if (!(words >> head)) continue;
        if (!g) {
            unsigned n = 0;
            if (head != "n" || !(words >> n)) fail("expected 'n <vertex count>'");
            if (n > kMaxGraphVertices) fail("too many vertices");
            g.emplace(n);
            continue;
        }
        if (head.empty() || head.back() != ':') fail("expected '<vertex>:'");
        unsigned i = 0;
        try {
            i = static_cast<unsigned>(std::stoul(head.substr(0, head.size() - 1)));
        } catch (const std::exception&) {
            fail("bad vertex label");
        }
        unsigned j = 0;
        while (words >> j) {
            if (i >= g->order() || j >= g->order() || i == j) fail("edge endpoint out of range");
            g->set_edge(i, j, true);
        }
        if (!words.eof()) fail("bad neighbour entry");
    }
    if (!g) throw InvalidArgument("graph text: missing 'n <vertex count>' header");
    return *g;
}

}  // namespace randbench::ramsey
