#include <chrono>
#include <ctime>
#include <exception>
#include <filesystem>
#include <iostream>

#include "common.hpp"
#include "randbench/errors.hpp"

namespace randbench::cli {

namespace {

std::string iso_timestamp(std::chrono::system_clock::time_point t) {
    const auto since_epoch = t.time_since_epoch();
    const std::time_t seconds = std::chrono::duration_cast<std::chrono::seconds>(since_epoch).count();
    const auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(since_epoch).count() % 1000;
    std::tm utc{};
    gmtime_r(&seconds, &utc);
    char buffer[40];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%S", &utc);
    char full[48];
    std::snprintf(full, sizeof full, "%s.%03dZ", buffer, static_cast<int>(millis));
    return full;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Context ctx;
    ctx.args = args;
    ctx.in = &in;
    ctx.out = &out;
    ctx.err = &err;

    CLI::App app{"Randomized algorithms workbench", "randbench"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", RANDBENCH_VERSION);
    app.add_option("--seed", ctx.seed, "Generator seed (default 0)");
    app.add_flag("--json", ctx.compact, "Compact single-line JSON output");
    auto* trials = app.add_option("--trials", ctx.trials, "Repeat randomized runs over derived streams")
                       ->check(CLI::Range(std::size_t{1}, std::size_t{1'000'000}));

    Selection selected;
    register_prime(app, selected);
    register_fingerprint(app, selected);
    register_factor(app, selected);
    register_mphf(app, selected);
    register_route(app, selected);
    register_ramsey(app, selected);

    if (args.empty()) {
        err << app.help();
        return kExitUsage;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << RANDBENCH_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return kExitUsage;
    }
    ctx.trials_given = trials->count() > 0;

    if (!selected.action) {
        err << "error: missing subcommand\n" << app.help();
        return kExitUsage;
    }

    const auto started = std::chrono::system_clock::now();
    const auto steady_start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = selected.action(ctx);
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const BudgetExhausted& e) {
        err << "not found: " << e.what() << '\n';
        return kExitNegative;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const OutOfDomain& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const TransportError& e) {
        err << "transport error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    if (!outcome.emit) return outcome.exit_code;

    const auto finished = std::chrono::system_clock::now();
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - steady_start);

    Json manifest;
    manifest["subcommand"] = selected.name;
    manifest["argv"] = args;
    manifest["seed"] = ctx.seed;
    if (ctx.trials_given) manifest["trials"] = ctx.trials;
    manifest["version"] = RANDBENCH_VERSION;
    manifest["started_at"] = iso_timestamp(started);
    manifest["finished_at"] = iso_timestamp(finished);
    manifest["elapsed_us"] = elapsed.count();

    Json document;
    document["manifest"] = std::move(manifest);
    document["result"] = std::move(outcome.result);
    *ctx.out << document.dump(ctx.compact ? -1 : 2, ' ', false, Json::error_handler_t::replace) << '\n';
    return outcome.exit_code;
}

}  // namespace randbench::cli
