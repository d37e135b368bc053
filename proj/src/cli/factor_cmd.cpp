#include "common.hpp"
#include "randbench/factor.hpp"

namespace randbench::cli {

namespace {

Outcome factor_outcome(const Natural& n, const factor::FactorOutcome& f) {
    Outcome o;
    o.result["n"] = n.to_decimal();
    o.result["bound"] = f.bound;
    o.result["curves_tried"] = f.curves_tried;
    if (f.divisor) {
        o.result["divisor"] = f.divisor->to_decimal();
        o.result["cofactor"] = (n / *f.divisor).to_decimal();
    } else {
        o.result["divisor"] = nullptr;
        o.result["cofactor"] = nullptr;
        o.exit_code = kExitNegative;
    }
    return o;
}

}  // namespace

void register_factor(CLI::App& root, Selection& selected) {
    auto* fac = root.add_subcommand("factor", "Las Vegas factoring; exit 1 when no factor is found");
    fac->require_subcommand(1);

    struct Pm1Args {
        std::string n;
        std::uint64_t bound = 0;
        std::string base = "3";
    };
    auto pm1_args = std::make_shared<Pm1Args>();
    auto* pm1 = fac->add_subcommand("pm1", "Pollard p-1 with smoothness bound B");
    pm1->add_option("n", pm1_args->n, "Odd composite (expressions like 2^32+1 accepted)")->required();
    pm1->add_option("--bound", pm1_args->bound, "Smoothness bound B")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100'000'000}));
    pm1->add_option("--base", pm1_args->base, "Exponentiation base (default 3)");
    pm1->callback([&selected, pm1_args] {
        selected = {"factor pm1", [pm1_args](Context&) {
                        const Natural n = parse_number(pm1_args->n);
                        const Natural base = parse_number(pm1_args->base);
                        Outcome o = factor_outcome(n, factor::pollard_pm1(n, pm1_args->bound, base));
                        o.result["base"] = base.to_decimal();
                        return o;
                    }};
    });

    struct EcmArgs {
        std::string n;
        std::uint64_t b1 = 1000;
        std::size_t curves = 200;
    };
    auto ecm_args = std::make_shared<EcmArgs>();
    auto* ecm = fac->add_subcommand("ecm", "Stage-1 elliptic curve method with random curves");
    ecm->add_option("n", ecm_args->n, "Composite coprime to 6")->required();
    ecm->add_option("--b1", ecm_args->b1, "Stage-1 bound (default 1000)")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100'000'000}));
    ecm->add_option("--curves", ecm_args->curves, "Maximum curves (default 200)")->check(CLI::Range(std::size_t{1}, std::size_t{10'000'000}));
    ecm->callback([&selected, ecm_args] {
        selected = {"factor ecm", [ecm_args](Context& ctx) {
                        const Natural n = parse_number(ecm_args->n);
                        auto rows = run_trials(ctx, [&](Rng& rng) {
                            return factor_outcome(n, factor::ecm_stage1(n, ecm_args->b1, ecm_args->curves, rng));
                        });
                        std::size_t found = 0;
                        std::uint64_t curves = 0;
                        for (const auto& r : rows) {
                            found += r.exit_code == kExitOk;
                            curves += r.result["curves_tried"].get<std::uint64_t>();
                        }
                        Json summary{{"found", found}, {"not_found", rows.size() - found}, {"total_curves", curves}};
                        return combine_trials(ctx, std::move(rows), summary);
                    }};
    });
}

}  // namespace randbench::cli
