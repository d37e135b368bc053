#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randbench/cli.hpp"
#include "randbench/natural.hpp"
#include "randbench/rng.hpp"

namespace randbench::cli {

using Json = nlohmann::ordered_json;

struct Context {
    std::uint64_t seed = 0;
    bool compact = false;
    std::size_t trials = 1;
    bool trials_given = false;
    std::vector<std::string> args;
    std::istream* in = nullptr;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
    /// Holds a file stream when a subcommand redirects its result away from `out`.
    std::shared_ptr<std::ostream> owned_out;
};

struct Outcome {
    Json result;
    int exit_code = kExitOk;
    /// Subcommands that stream their own output (the protocol server) skip the JSON envelope.
    bool emit = true;
};

using Action = std::function<Outcome(Context&)>;

/// The subcommand picked by the parser, filled in by a CLI11 callback.
struct Selection {
    std::string name;
    Action action;
};

void register_prime(CLI::App& root, Selection& selected);
void register_fingerprint(CLI::App& root, Selection& selected);
void register_factor(CLI::App& root, Selection& selected);
void register_mphf(CLI::App& root, Selection& selected);
void register_route(CLI::App& root, Selection& selected);
void register_ramsey(CLI::App& root, Selection& selected);

/// Decimal or 0x-hex literals combined with + - * ^ and parentheses, e.g. `2^2048+1`.
Natural parse_number(std::string_view text);

/// Fixed-point decimal string with 12 significant digits.
std::string format_decimal(double p);

/// Runs `one` once per trial. Without --trials the single run uses Rng(seed);
/// with it, trial i uses derive_stream(seed, i). Trials may run concurrently;
/// the returned rows are in trial order.
std::vector<Outcome> run_trials(const Context& ctx, const std::function<Outcome(Rng&)>& one);

/// Wraps per-trial outcomes: a single untagged result, or {"trials": [...], "summary": ...}.
/// The exit code is the worst (largest) across trials.
Outcome combine_trials(const Context& ctx, std::vector<Outcome> rows, Json summary = Json::object());

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace randbench::cli
