#include <fstream>

#include "common.hpp"
#include "randbench/errors.hpp"
#include "randbench/mphf.hpp"

namespace randbench::cli {

namespace {

// One key per line; a trailing CR is dropped so CRLF files behave like LF files.
std::vector<std::string> read_word_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        words.push_back(std::move(line));
    }
    return words;
}

mphf::PerfectHash load_function(const std::string& path) {
    const auto bytes = read_file_bytes(path);
    return mphf::deserialize(bytes);
}

}  // namespace

void register_mphf(CLI::App& root, Selection& selected) {
    auto* mp = root.add_subcommand("mphf", "Order-preserving minimal perfect hashing");
    mp->require_subcommand(1);

    struct BuildArgs {
        std::string words;
        std::string output;
        double ratio = 3.0;
        std::size_t max_trials = 1000;
    };
    auto build_args = std::make_shared<BuildArgs>();
    auto* build = mp->add_subcommand("build", "Build a function mapping line j of the word list to j");
    build->add_option("wordlist", build_args->words, "One key per line")->required()->check(CLI::ExistingFile);
    build->add_option("-o,--output", build_args->output, "Output .chm file")->required();
    build->add_option("--ratio", build_args->ratio, "Vertices per key, must exceed 2 (default 3)");
    build->add_option("--max-trials", build_args->max_trials, "Give up after this many rejected graphs (default 1000)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100'000'000}));
    build->callback([&selected, build_args] {
        selected = {"mphf build", [build_args](Context& ctx) {
                        const mphf::WordSet words(read_word_list(build_args->words));
                        Rng rng(ctx.seed);
                        mphf::BuildOptions options;
                        options.ratio = build_args->ratio;
                        options.max_trials = build_args->max_trials;
                        const auto [fn, report] = mphf::build(words, rng, options);
                        const auto bytes = mphf::serialize(fn);
                        write_file_bytes(build_args->output, bytes);
                        Outcome o;
                        o.result["keys"] = fn.key_count();
                        o.result["vertices"] = fn.vertex_count();
                        o.result["width"] = fn.width();
                        o.result["trials"] = report.trials;
                        o.result["generator_state"] = report.seed;
                        o.result["bytes"] = bytes.size();
                        o.result["output"] = build_args->output;
                        return o;
                    }};
    });

    struct QueryArgs {
        std::string function;
        std::string word;
    };
    auto query_args = std::make_shared<QueryArgs>();
    auto* query = mp->add_subcommand("query", "Evaluate a stored function on one word");
    query->add_option("function", query_args->function, ".chm file")->required()->check(CLI::ExistingFile);
    query->add_option("word", query_args->word, "Key to hash")->required();
    query->callback([&selected, query_args] {
        selected = {"mphf query", [query_args](Context&) {
                        const auto fn = load_function(query_args->function);
                        Outcome o;
                        o.result["word"] = query_args->word;
                        o.result["value"] = fn(query_args->word);
                        return o;
                    }};
    });

    struct VerifyArgs {
        std::string function;
        std::string words;
    };
    auto verify_args = std::make_shared<VerifyArgs>();
    auto* verify = mp->add_subcommand("verify", "Check h(line j) = j for every line; exit 1 on failure");
    verify->add_option("function", verify_args->function, ".chm file")->required()->check(CLI::ExistingFile);
    verify->add_option("wordlist", verify_args->words, "One key per line")->required()->check(CLI::ExistingFile);
    verify->callback([&selected, verify_args] {
        selected = {"mphf verify", [verify_args](Context&) {
                        const auto fn = load_function(verify_args->function);
                        const auto words = read_word_list(verify_args->words);
                        Outcome o;
                        Json failures = Json::array();
                        std::size_t failed = 0;
                        for (std::size_t j = 0; j < words.size(); ++j) {
                            std::optional<std::uint64_t> value;
                            if (words[j].size() <= fn.width()) value = fn(words[j]);
                            if (value == j) continue;
                            ++failed;
                            if (failures.size() < 10) {
                                failures.push_back(Json{{"line", j},
                                                        {"word", words[j]},
                                                        {"value", value ? Json(*value) : Json(nullptr)}});
                            }
                        }
                        const bool count_ok = words.size() == fn.key_count();
                        o.result["keys"] = fn.key_count();
                        o.result["words"] = words.size();
                        o.result["ordered"] = failed == 0 && count_ok;
                        o.result["failures"] = failed;
                        o.result["first_failures"] = std::move(failures);
                        o.exit_code = failed == 0 && count_ok ? kExitOk : kExitNegative;
                        return o;
                    }};
    });
}

}  // namespace randbench::cli
