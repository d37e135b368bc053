#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "common.hpp"
#include "randbench/errors.hpp"
#include "randbench/ramsey.hpp"

namespace randbench::cli {

namespace {

struct Triple {
    unsigned n = 0;
    unsigned s = 0;
    unsigned t = 0;
};

void add_triple(CLI::App* cmd, Triple& triple) {
    cmd->add_option("--n", triple.n, "Vertices")->required();
    cmd->add_option("--s", triple.s, "Forbidden clique size")->required();
    cmd->add_option("--t", triple.t, "Forbidden independent set size")->required();
}

// Reads an annealing config from JSON; absent keys keep their defaults.
ramsey::AnnealConfig load_config(const std::string& path) {
    ramsey::AnnealConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
        for (const auto& [key, value] : j.items()) {
            if (key == "initial_temperature") {
                cfg.initial_temperature = value.get<double>();
            } else if (key == "cooling") {
                cfg.cooling = value.get<double>();
            } else if (key == "steps_per_temperature") {
                cfg.steps_per_temperature = value.get<std::uint64_t>();
            } else if (key == "max_total_steps") {
                cfg.max_total_steps = value.get<std::uint64_t>();
            } else if (key == "restarts") {
                cfg.restarts = value.get<std::uint64_t>();
            } else if (key == "stall_limit") {
                cfg.stall_limit = value.get<std::uint64_t>();
            } else if (key == "audit_energy") {
                cfg.audit_energy = value.get<bool>();
            } else {
                throw InvalidArgument("config '" + path + "': unknown key '" + key + "'");
            }
        }
    } catch (const Json::exception& e) {
        throw InvalidArgument("config '" + path + "': " + e.what());
    }
    cfg.validate();
    return cfg;
}

}  // namespace

void register_ramsey(CLI::App& root, Selection& selected) {
    auto* rm = root.add_subcommand("ramsey", "Search for graphs without s-cliques or independent t-sets");
    rm->require_subcommand(1);

    struct AnnealArgs {
        Triple triple;
        std::string config;
        std::string output;
    };
    auto anneal_args = std::make_shared<AnnealArgs>();
    auto* anneal = rm->add_subcommand("anneal", "Simulated annealing over edge flips; exit 1 if nothing is found");
    add_triple(anneal, anneal_args->triple);
    anneal->add_option("--config", anneal_args->config, "JSON file overriding the annealing schedule")
        ->check(CLI::ExistingFile);
    anneal->add_option("--output", anneal_args->output, "Also write the graph as adjacency-list text here");
    anneal->callback([&selected, anneal_args] {
        selected = {"ramsey anneal", [anneal_args](Context& ctx) {
                        const auto [n, s, t] = anneal_args->triple;
                        const auto cfg = load_config(anneal_args->config);
                        if (ctx.trials_given && !anneal_args->output.empty()) {
                            throw InvalidArgument("--output cannot be combined with --trials");
                        }
                        auto rows = run_trials(ctx, [&](Rng& rng) {
                            const auto res = ramsey::anneal(n, s, t, cfg, rng);
                            Outcome o;
                            auto& r = o.result;
                            r["n"] = n;
                            r["s"] = s;
                            r["t"] = t;
                            r["found"] = res.found();
                            r["total_steps"] = res.total_steps;
                            r["restarts_used"] = res.restarts_used;
                            r["best_energy"] = res.best_energy;
                            if (res.graph) {
                                r["edges"] = res.graph->edge_count();
                                r["graph"] = ramsey::format_graph(*res.graph);
                                if (!anneal_args->output.empty()) {
                                    const auto text = ramsey::format_graph(*res.graph);
                                    write_file_bytes(anneal_args->output, {text.begin(), text.end()});
                                }
                            } else {
                                r["edges"] = nullptr;
                                r["graph"] = nullptr;
                                o.exit_code = kExitNegative;
                            }
                            return o;
                        });
                        std::size_t found = 0;
                        for (const auto& row : rows) found += row.exit_code == kExitOk;
                        Json summary{{"found", found}, {"not_found", rows.size() - found}};
                        return combine_trials(ctx, std::move(rows), summary);
                    }};
    });

    auto exhaustive_args = std::make_shared<Triple>();
    auto* exhaustive = rm->add_subcommand("exhaustive", "Enumerate every labeled graph (n <= 7); exit 1 if none qualify");
    add_triple(exhaustive, *exhaustive_args);
    exhaustive->callback([&selected, exhaustive_args] {
        selected = {"ramsey exhaustive", [exhaustive_args](Context&) {
                        const auto [n, s, t] = *exhaustive_args;
                        const auto graphs = ramsey::exhaustive_search(n, s, t);
                        std::set<std::vector<std::uint8_t>> classes;
                        for (const auto& g : graphs) classes.insert(ramsey::canonical_form(g));
                        Outcome o;
                        o.result["n"] = n;
                        o.result["s"] = s;
                        o.result["t"] = t;
                        o.result["labeled_graphs"] = graphs.size();
                        o.result["classes"] = classes.size();
                        o.result["example"] = graphs.empty() ? Json(nullptr) : Json(ramsey::format_graph(graphs.front()));
                        o.exit_code = graphs.empty() ? kExitNegative : kExitOk;
                        return o;
                    }};
    });

    struct CensusArgs {
        std::string dir;
        unsigned s = 0;
        unsigned t = 0;
    };
    auto census_args = std::make_shared<CensusArgs>();
    auto* census = rm->add_subcommand("census", "Count distinct graphs among saved search results");
    census->add_option("--dir", census_args->dir, "Directory of adjacency-list graph files")
        ->required()
        ->check(CLI::ExistingDirectory);
    census->add_option("--s", census_args->s, "If given with --t, reject graphs that have violations");
    census->add_option("--t", census_args->t, "See --s");
    census->callback([&selected, census_args] {
        selected = {"ramsey census", [census_args](Context&) {
                        std::vector<std::filesystem::path> files;
                        for (const auto& entry : std::filesystem::directory_iterator(census_args->dir)) {
                            if (entry.is_regular_file()) files.push_back(entry.path());
                        }
                        std::sort(files.begin(), files.end());
                        std::vector<ramsey::Graph> graphs;
                        for (const auto& path : files) {
                            std::ifstream in(path);
                            try {
                                graphs.push_back(ramsey::parse_graph(in));
                            } catch (const InvalidArgument& e) {
                                throw InvalidArgument(path.string() + ": " + e.what());
                            }
                            const bool check = census_args->s != 0 && census_args->t != 0;
                            if (check && ramsey::count_violations(graphs.back(), census_args->s, census_args->t) != 0) {
                                throw InvalidArgument(path.string() + " contains a forbidden clique or independent set");
                            }
                        }
                        if (graphs.empty()) throw InvalidArgument("no graph files in '" + census_args->dir + "'");
                        const auto c = ramsey::census(graphs);
                        Outcome o;
                        o.result["runs"] = c.runs;
                        o.result["distinct"] = c.distinct;
                        o.result["confidence"] = format_decimal(c.confidence);
                        o.result["isomorphism_classes"] = c.isomorphism_classes;
                        o.result["note"] = c.isomorphism_classes
                                               ? "distinct counts isomorphism classes with complements identified"
                                               : "some graphs exceed 10 vertices; distinct counts labeled graphs "
                                                 "with complements identified";
                        return o;
                    }};
    });
}

}  // namespace randbench::cli
