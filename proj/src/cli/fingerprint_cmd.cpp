#include <fstream>

#include "common.hpp"
#include "randbench/errors.hpp"
#include "randbench/fingerprint.hpp"

namespace randbench::cli {

namespace {

struct FingerprintArgs {
    std::string local;
    std::string remote;
    std::size_t rounds = 10;
    std::string prime_lo = "1000000000";
    std::string prime_hi = "2000000000";
    std::string output;
};

void add_common_flags(CLI::App* cmd, FingerprintArgs& a) {
    cmd->add_option("local", a.local, "Local document")->required()->check(CLI::ExistingFile);
    cmd->add_option("--remote", a.remote, "Remote document file, or '-' to speak the line protocol on stdin/stdout")
        ->required();
    cmd->add_option("--rounds", a.rounds, "Random primes per comparison (default 10)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
    cmd->add_option("--prime-lo", a.prime_lo, "Exclusive lower end of the prime interval (default 10^9)");
    cmd->add_option("--prime-hi", a.prime_hi, "Exclusive upper end of the prime interval (default 2*10^9)");
    cmd->add_option("--output", a.output, "Write the JSON report here (stderr is used with --remote -)");
}

fingerprint::PrimeSource prime_source(const FingerprintArgs& a) {
    fingerprint::PrimeSource source;
    source.lo = parse_number(a.prime_lo);
    source.hi = parse_number(a.prime_hi);
    if (source.hi <= source.lo + Natural(1)) throw InvalidArgument("prime interval is empty");
    return source;
}

// Routes the report and returns the oracle for the chosen transport.
std::unique_ptr<fingerprint::ResidueOracle> open_remote(Context& ctx, const FingerprintArgs& a,
                                                        std::unique_ptr<fingerprint::Document>& remote_doc) {
    if (!a.output.empty()) {
        auto file = std::make_shared<std::ofstream>(a.output, std::ios::trunc);
        if (!*file) throw InvalidArgument("cannot write '" + a.output + "'");
        ctx.owned_out = file;
        ctx.out = file.get();
    }
    if (a.remote == "-") {
        if (ctx.trials_given) throw InvalidArgument("--trials cannot be combined with --remote -");
        std::ostream* protocol_out = ctx.out;
        if (a.output.empty()) ctx.out = ctx.err;
        return std::make_unique<fingerprint::StreamOracle>(*ctx.in, *protocol_out);
    }
    remote_doc = std::make_unique<fingerprint::Document>(fingerprint::Document::from_file(a.remote));
    return std::make_unique<fingerprint::LocalOracle>(*remote_doc);
}

}  // namespace

void register_fingerprint(CLI::App& root, Selection& selected) {
    auto* fp = root.add_subcommand("fingerprint", "Compare documents by residues modulo random primes");
    fp->require_subcommand(1);

    auto verify_args = std::make_shared<FingerprintArgs>();
    auto* verify = fp->add_subcommand("verify", "Equality check; exit 1 on mismatch");
    add_common_flags(verify, *verify_args);
    verify->callback([&selected, verify_args] {
        selected = {"fingerprint verify", [verify_args](Context& ctx) {
                        const auto& a = *verify_args;
                        const auto local = fingerprint::Document::from_file(a.local);
                        const auto source = prime_source(a);
                        std::unique_ptr<fingerprint::Document> remote_doc;
                        auto oracle = open_remote(ctx, a, remote_doc);
                        auto rows = run_trials(ctx, [&](Rng& rng) {
                            std::unique_ptr<fingerprint::LocalOracle> own;
                            fingerprint::ResidueOracle* remote = oracle.get();
                            if (remote_doc) {
                                own = std::make_unique<fingerprint::LocalOracle>(*remote_doc);
                                remote = own.get();
                            }
                            const auto report = fingerprint::verify(local, *remote, a.rounds, rng, source);
                            Outcome o;
                            auto& r = o.result;
                            r["verdict"] = report.verdict == fingerprint::Verdict::Match ? "match" : "mismatch";
                            r["rounds"] = report.rounds;
                            r["length_mismatch"] = report.length_mismatch;
                            r["primes"] = Json::array();
                            for (const auto& p : report.primes_used) r["primes"].push_back(p.to_decimal());
                            r["residues"] = Json::array();
                            for (const auto& pair : report.residue_pairs) {
                                r["residues"].push_back(
                                    Json{{"local", pair.local.to_decimal()}, {"remote", pair.remote.to_decimal()}});
                            }
                            r["max_prime_divisors"] = report.max_prime_divisors;
                            r["primes_in_interval"] = report.primes_in_interval;
                            r["false_positive_bound"] = report.false_positive_bound
                                                            ? Json(format_decimal(*report.false_positive_bound))
                                                            : Json(nullptr);
                            o.exit_code = report.verdict == fingerprint::Verdict::Match ? kExitOk : kExitNegative;
                            return o;
                        });
                        std::size_t mismatches = 0;
                        for (const auto& row : rows) mismatches += row.exit_code == kExitNegative;
                        Json summary{{"mismatch", mismatches}, {"match", rows.size() - mismatches}};
                        return combine_trials(ctx, std::move(rows), summary);
                    }};
    });

    auto localize_args = std::make_shared<FingerprintArgs>();
    auto* localize = fp->add_subcommand("localize", "Find corrupted bytes by bisection; exit 1 if any differ");
    add_common_flags(localize, *localize_args);
    localize->callback([&selected, localize_args] {
        selected = {"fingerprint localize", [localize_args](Context& ctx) {
                        const auto& a = *localize_args;
                        const auto local = fingerprint::Document::from_file(a.local);
                        const auto source = prime_source(a);
                        std::unique_ptr<fingerprint::Document> remote_doc;
                        auto oracle = open_remote(ctx, a, remote_doc);
                        auto rows = run_trials(ctx, [&](Rng& rng) {
                            std::unique_ptr<fingerprint::LocalOracle> own;
                            fingerprint::ResidueOracle* remote = oracle.get();
                            if (remote_doc) {
                                own = std::make_unique<fingerprint::LocalOracle>(*remote_doc);
                                remote = own.get();
                            }
                            const auto report = fingerprint::localize(local, *remote, a.rounds, rng, source);
                            Outcome o;
                            o.result["length"] = local.size();
                            o.result["corrupted"] = Json::array();
                            for (const auto& range : report.corrupted) {
                                o.result["corrupted"].push_back(Json{{"offset", range.offset}, {"length", range.length}});
                            }
                            o.result["probes"] = report.probes;
                            o.result["queries"] = report.queries;
                            o.exit_code = report.corrupted.empty() ? kExitOk : kExitNegative;
                            return o;
                        });
                        return combine_trials(ctx, std::move(rows));
                    }};
    });

    auto serve_path = std::make_shared<std::string>();
    auto* serve = fp->add_subcommand("serve", "Answer residue queries about a document on stdin/stdout");
    serve->add_option("document", *serve_path, "Document to serve")->required()->check(CLI::ExistingFile);
    serve->callback([&selected, serve_path] {
        selected = {"fingerprint serve", [serve_path](Context& ctx) {
                        const fingerprint::ResidueServer server(fingerprint::Document::from_file(*serve_path));
                        const std::size_t served = server.serve(*ctx.in, *ctx.out);
                        *ctx.err << "served " << served << " requests\n";
                        Outcome o;
                        o.emit = false;
                        return o;
                    }};
    });
}

}  // namespace randbench::cli
