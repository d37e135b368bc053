#include "randbench/mphf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_set>

#include "randbench/errors.hpp"

namespace randbench::mphf {

namespace {

constexpr std::size_t kAlphabet = 256;
constexpr std::uint8_t kFormatVersion = 1;
constexpr char kMagic[4] = {'C', 'H', 'M', '1'};

std::string_view strip_trailing_nul(std::string_view s) {
    while (!s.empty() && s.back() == '\0') s.remove_suffix(1);
    return s;
}

std::uint64_t table_sum(const std::vector<std::uint64_t>& table, std::string_view word, std::uint64_t width,
                        std::uint64_t n) {
    unsigned __int128 sum = 0;
    for (std::uint64_t j = 0; j < width; ++j) {
        const auto symbol = j < word.size() ? static_cast<std::uint8_t>(word[j]) : std::uint8_t{0};
        sum += table[j * kAlphabet + symbol];
    }
    return static_cast<std::uint64_t>(sum % n);
}

// Peels degree-1 vertices. Returns the removed (edge, leaf) pairs in removal
// order; all edges are removed iff the graph is acyclic.
std::vector<std::pair<std::size_t, std::uint64_t>> peel(std::uint64_t n, std::span<const Edge> edges) {
    std::vector<std::uint32_t> degree(n, 0);
    std::vector<std::uint64_t> incident_xor(n, 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        ++degree[edges[e].u];
        ++degree[edges[e].v];
        incident_xor[edges[e].u] ^= e;
        incident_xor[edges[e].v] ^= e;
    }
    std::vector<std::uint64_t> stack;
    for (std::uint64_t v = 0; v < n; ++v) {
        if (degree[v] == 1) stack.push_back(v);
    }
    std::vector<std::pair<std::size_t, std::uint64_t>> order;
    order.reserve(edges.size());
    while (!stack.empty()) {
        const std::uint64_t leaf = stack.back();
        stack.pop_back();
        if (degree[leaf] != 1) continue;
        const std::size_t e = incident_xor[leaf];
        const std::uint64_t other = edges[e].u == leaf ? edges[e].v : edges[e].u;
        order.emplace_back(e, leaf);
        degree[leaf] = 0;
        incident_xor[other] ^= e;
        if (--degree[other] == 1) stack.push_back(other);
    }
    return order;
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint64_t u64(const char* field) {
        require(8, field);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }
    std::uint8_t u8(const char* field) {
        require(1, field);
        return bytes_[pos_++];
    }
    void require(std::size_t count, const char* field) const {
        if (bytes_.size() - pos_ < count) throw FormatError(std::string("truncated ") + field, pos_);
    }
    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

WordSet::WordSet(std::vector<std::string> words) : words_(std::move(words)) {
    if (words_.empty()) throw InvalidArgument("word set must not be empty");
    std::unordered_set<std::string_view> seen;
    seen.reserve(words_.size() * 2);
    for (const auto& w : words_) {
        if (!seen.insert(strip_trailing_nul(w)).second) {
            throw InvalidArgument("duplicate word '" + w + "' (keys equal up to trailing NUL bytes are duplicates)");
        }
        width_ = std::max(width_, w.size());
    }
}

PerfectHash::PerfectHash(std::uint64_t m, std::uint64_t n, std::uint64_t width, std::vector<std::uint64_t> t1,
                         std::vector<std::uint64_t> t2, std::vector<std::uint64_t> g)
    : m_(m), n_(n), width_(width), t1_(std::move(t1)), t2_(std::move(t2)), g_(std::move(g)) {
    if (m_ == 0 || n_ == 0 || width_ == 0) throw InvalidArgument("PerfectHash: m, n and width must be positive");
    if (t1_.size() != width_ * kAlphabet || t2_.size() != width_ * kAlphabet || g_.size() != n_) {
        throw InvalidArgument("PerfectHash: table sizes do not match parameters");
    }
}

Edge PerfectHash::edge(std::string_view word) const {
    if (word.size() > width_) {
        throw OutOfDomain("word of length " + std::to_string(word.size()) + " exceeds hash width " +
                          std::to_string(width_));
    }
    return {table_sum(t1_, word, width_, n_), table_sum(t2_, word, width_, n_)};
}

std::uint64_t PerfectHash::operator()(std::string_view word) const {
    const Edge e = edge(word);
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(g_[e.u]) + g_[e.v]) % m_);
}

bool is_acyclic(std::uint64_t n, std::span<const Edge> edges) {
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) throw InvalidArgument("is_acyclic: vertex out of range");
        if (e.u == e.v) return false;
    }
    return peel(n, edges).size() == edges.size();
}

std::pair<PerfectHash, BuildReport> build(const WordSet& words, Rng& rng, const BuildOptions& options) {
    if (!(options.ratio > 2.0)) throw InvalidArgument("build: ratio n/m must exceed 2");
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t m = words.size();
    const auto n = static_cast<std::uint64_t>(std::ceil(options.ratio * static_cast<double>(m)));
    if (n <= 2 * m) throw InvalidArgument("build: n = ceil(ratio * m) must exceed 2m");
    const std::uint64_t width = words.width();

    BuildReport report;
    report.seed = rng.state();

    std::vector<std::uint64_t> t1(width * kAlphabet);
    std::vector<std::uint64_t> t2(width * kAlphabet);
    std::vector<Edge> edges(m);
    for (std::size_t trial = 1; trial <= options.max_trials; ++trial) {
        report.trials = trial;
        for (auto& v : t1) v = rng.uniform_below(n);
        for (auto& v : t2) v = rng.uniform_below(n);

        bool self_loop = false;
        for (std::uint64_t j = 0; j < m && !self_loop; ++j) {
            edges[j] = {table_sum(t1, words[j], width, n), table_sum(t2, words[j], width, n)};
            self_loop = edges[j].u == edges[j].v;
        }
        if (self_loop) continue;

        const auto order = peel(n, edges);
        if (order.size() != m) continue;

        // Reverse removal order visits each tree from its root outward, so the
        // non-leaf endpoint of every edge is already final when it is used.
        std::vector<std::uint64_t> g(n, 0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const auto [j, leaf] = *it;
            const std::uint64_t other = edges[j].u == leaf ? edges[j].v : edges[j].u;
            g[leaf] = (j + m - g[other]) % m;
        }

        PerfectHash f(m, n, width, t1, t2, std::move(g));
        for (std::uint64_t j = 0; j < m; ++j) {
            if (f(words[j]) != j) throw InternalError("build: ordering check failed for key " + std::to_string(j));
        }
        report.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
        return {std::move(f), report};
    }
    throw BudgetExhausted("build: " + std::to_string(options.max_trials) +
                          " consecutive trials produced cyclic graphs; ratio is too low");
}

std::vector<std::uint8_t> serialize(const PerfectHash& f) {
    std::vector<std::uint8_t> out;
    out.reserve(5 + 8 * (3 + f.table1().size() * 2 + f.g().size()));
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    out.push_back(kFormatVersion);
    put_u64(out, f.key_count());
    put_u64(out, f.vertex_count());
    put_u64(out, f.width());
    for (auto v : f.table1()) put_u64(out, v);
    for (auto v : f.table2()) put_u64(out, v);
    for (auto v : f.g()) put_u64(out, v);
    return out;
}

PerfectHash deserialize(std::span<const std::uint8_t> bytes) {
    Reader in(bytes);
    in.require(4, "magic");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad magic (expected \"CHM1\")", 0);
    for (int i = 0; i < 4; ++i) in.u8("magic");
    if (std::uint8_t version = in.u8("version"); version != kFormatVersion) {
        throw FormatError("unsupported version " + std::to_string(version), 4);
    }
    const std::uint64_t m = in.u64("m");
    const std::size_t n_offset = in.position();
    const std::uint64_t n = in.u64("n");
    const std::size_t width_offset = in.position();
    const std::uint64_t width = in.u64("L");
    if (m == 0) throw FormatError("m must be positive", n_offset - 8);
    if (n == 0) throw FormatError("n must be positive", n_offset);
    if (width == 0) throw FormatError("L must be positive", width_offset);

    // Check sizes against what remains before allocating anything.
    const std::uint64_t words_left = in.remaining() / 8;
    if (width > words_left / (2 * kAlphabet) || n > words_left - 2 * kAlphabet * width) {
        throw FormatError("truncated tables", bytes.size());
    }
    const std::uint64_t needed = 8 * (2 * kAlphabet * width + n);
    if (in.remaining() != needed) throw FormatError("trailing bytes after g", in.position() + needed);

    auto read_table = [&](std::uint64_t count, std::uint64_t limit, const char* field) {
        std::vector<std::uint64_t> table(count);
        for (auto& v : table) {
            const std::size_t at = in.position();
            v = in.u64(field);
            if (v >= limit) throw FormatError(std::string(field) + " entry out of range", at);
        }
        return table;
    };
    auto t1 = read_table(width * kAlphabet, n, "T1");
    auto t2 = read_table(width * kAlphabet, n, "T2");
    auto g = read_table(n, m, "g");
    return PerfectHash(m, n, width, std::move(t1), std::move(t2), std::move(g));
}

}  // namespace randbench::mphf
