#include "common.hpp"
#include "randbench/errors.hpp"
#include "randbench/primality.hpp"

namespace randbench::cli {

namespace {

const char* answer_name(primality::Answer a) {
    return a == primality::Answer::ProbablyPrime ? "probably_prime" : "composite";
}

}  // namespace

void register_prime(CLI::App& root, Selection& selected) {
    auto* prime = root.add_subcommand("prime", "Randomized primality testing");
    prime->require_subcommand(1);

    struct TestArgs {
        std::string n;
        std::size_t rounds = 20;
    };
    auto test_args = std::make_shared<TestArgs>();
    auto* test = prime->add_subcommand("test", "Probabilistic primality test; exit 1 when composite");
    test->add_option("n", test_args->n, "Number to test (decimal, 0x-hex, or an expression like 2^61-1)")->required();
    test->add_option("--rounds", test_args->rounds, "Maximum rounds (default 20)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{10'000}));
    test->callback([&selected, test_args] {
        selected = {"prime test", [test_args](Context& ctx) {
                        const Natural n = parse_number(test_args->n);
                        auto rows = run_trials(ctx, [&](Rng& rng) {
                            const auto v = primality::is_probable_prime(n, test_args->rounds, rng);
                            Outcome o;
                            o.result["n"] = n.to_decimal();
                            o.result["answer"] = answer_name(v.answer);
                            o.result["rounds"] = v.rounds_used;
                            o.result["rounds_requested"] = test_args->rounds;
                            o.result["decided_directly"] = v.decided_directly;
                            o.result["error_bound"] = format_decimal(v.error_bound());
                            o.result["error_bound_exact"] =
                                v.error_bound() == 0.0 ? "0" : "1/" + v.error_bound_denominator().to_decimal();
                            o.exit_code = v.answer == primality::Answer::Composite ? kExitNegative : kExitOk;
                            return o;
                        });
                        std::size_t composite = 0;
                        for (const auto& r : rows) composite += r.exit_code == kExitNegative;
                        Json summary;
                        summary["composite"] = composite;
                        summary["probably_prime"] = rows.size() - composite;
                        return combine_trials(ctx, std::move(rows), summary);
                    }};
    });

    auto density_n = std::make_shared<std::uint64_t>(0);
    auto* density = prime->add_subcommand("witness-density", "Exact fraction of non-witnesses for an odd composite");
    density->add_option("n", *density_n, "Odd composite, 9 <= n <= 1000000")->required();
    density->callback([&selected, density_n] {
        selected = {"prime witness-density", [density_n](Context&) {
                        const auto d = primality::witness_density(*density_n);
                        Outcome o;
                        o.result["n"] = std::to_string(*density_n);
                        o.result["passing"] = d.passing;
                        o.result["candidates"] = d.candidates;
                        o.result["density"] = format_decimal(d.value());
                        o.result["below_quarter"] = d.below(1, 4);
                        return o;
                    }};
    });

    struct RandomArgs {
        std::string lo;
        std::string hi;
        std::size_t rounds = 20;
    };
    auto random_args = std::make_shared<RandomArgs>();
    auto* random = prime->add_subcommand("random", "Uniform probable prime in the open interval (lo, hi)");
    random->add_option("--lo", random_args->lo, "Exclusive lower bound")->required();
    random->add_option("--hi", random_args->hi, "Exclusive upper bound")->required();
    random->add_option("--rounds", random_args->rounds, "Primality rounds per candidate (default 20)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{10'000}));
    random->callback([&selected, random_args] {
        selected = {"prime random", [random_args](Context& ctx) {
                        const Natural lo = parse_number(random_args->lo);
                        const Natural hi = parse_number(random_args->hi);
                        auto rows = run_trials(ctx, [&](Rng& rng) {
                            Outcome o;
                            o.result["lo"] = lo.to_decimal();
                            o.result["hi"] = hi.to_decimal();
                            try {
                                o.result["prime"] =
                                    primality::random_prime_in(lo, hi, random_args->rounds, rng).to_decimal();
                            } catch (const BudgetExhausted& e) {
                                o.result["prime"] = nullptr;
                                o.result["note"] = e.what();
                                o.exit_code = kExitNegative;
                            }
                            return o;
                        });
                        return combine_trials(ctx, std::move(rows));
                    }};
    });
}

}  // namespace randbench::cli
