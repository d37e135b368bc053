#include "common.hpp"
#include "randbench/errors.hpp"
#include "randbench/route.hpp"

namespace randbench::cli {

void register_route(CLI::App& root, Selection& selected) {
    auto* rt = root.add_subcommand("route", "Hypercube permutation routing");
    rt->require_subcommand(1);

    struct SimArgs {
        unsigned d = 0;
        std::string perm = "bitrev";
        std::string algo = "greedy";
        std::string sync = "per-packet";
    };
    auto args = std::make_shared<SimArgs>();
    auto* sim = rt->add_subcommand("sim", "Simulate one permutation routing");
    sim->add_option("--d", args->d, "Cube dimension")->required()->check(CLI::Range(1U, route::kMaxDimension));
    sim->add_option("--perm", args->perm, "bitrev | identity | random | file:<path> (default bitrev)");
    sim->add_option("--algo", args->algo, "greedy | valiant (default greedy)")
        ->check(CLI::IsMember({"greedy", "valiant"}));
    sim->add_option("--sync", args->sync, "Two-phase turn rule: per-packet | barrier (default per-packet)")
        ->check(CLI::IsMember({"per-packet", "barrier"}));
    sim->callback([&selected, args] {
        selected = {"route sim", [args](Context& ctx) {
                        const unsigned d = args->d;
                        std::optional<route::Permutation> fixed;
                        if (args->perm == "bitrev") {
                            fixed = route::bit_reversal(d);
                        } else if (args->perm == "identity") {
                            fixed = route::identity_permutation(d);
                        } else if (args->perm.rfind("file:", 0) == 0) {
                            fixed = route::load_permutation(args->perm.substr(5), d);
                        } else if (args->perm != "random") {
                            throw InvalidArgument("unknown permutation '" + args->perm + "'");
                        }
                        const auto sync =
                            args->sync == "barrier" ? route::PhaseSync::Barrier : route::PhaseSync::PerPacket;

                        auto rows = run_trials(ctx, [&](Rng& rng) {
                            const route::Permutation perm = fixed ? *fixed : route::random_permutation(d, rng);
                            const auto stats = args->algo == "valiant" ? route::run_valiant(d, perm, rng, sync)
                                                                       : route::run_oblivious(d, perm);
                            Outcome o;
                            auto& r = o.result;
                            r["d"] = d;
                            r["algo"] = args->algo;
                            r["perm"] = args->perm;
                            r["seed"] = ctx.seed;
                            r["total_steps"] = stats.total_steps;
                            r["max_vertex_throughput"] =
                                Json{{"vertex", stats.busiest_vertex}, {"packets", stats.busiest_count}};
                            r["vertex0_throughput"] = stats.vertex_throughput[0];
                            r["max_queue_depth"] = stats.max_queue_depth;
                            if (args->algo == "valiant") {
                                r["sync"] = args->sync;
                                r["first_leg_steps"] = stats.first_leg_steps;
                                r["second_leg_steps"] = stats.second_leg_steps;
                            }
                            return o;
                        });

                        std::uint64_t sum = 0;
                        std::uint64_t worst = 0;
                        std::uint64_t best = UINT64_MAX;
                        std::size_t within = 0;
                        for (const auto& row : rows) {
                            const auto steps = row.result["total_steps"].get<std::uint64_t>();
                            sum += steps;
                            worst = std::max(worst, steps);
                            best = std::min(best, steps);
                            within += steps <= 14ULL * d;
                        }
                        Json summary;
                        summary["runs"] = rows.size();
                        summary["min_total_steps"] = best;
                        summary["max_total_steps"] = worst;
                        summary["mean_total_steps"] =
                            format_decimal(static_cast<double>(sum) / static_cast<double>(rows.size()));
                        summary["runs_within_14d"] = within;
                        return combine_trials(ctx, std::move(rows), summary);
                    }};
    });
}

}  // namespace randbench::cli
