#include "common.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iterator>
#include <thread>

#include "randbench/errors.hpp"

namespace randbench::cli {

namespace {

// Recursive descent over: expr = term {(+|-) term}; term = power {* power}; power = atom [^ power].
class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    Natural parse() {
        Natural value = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character");
        return value;
    }

private:
    Natural expression() {
        Natural value = term();
        for (;;) {
            skip_space();
            if (consume('+')) {
                value += term();
            } else if (consume('-')) {
                Natural rhs = term();
                if (rhs > value) fail("result would be negative");
                value -= rhs;
            } else {
                return value;
            }
        }
    }

    Natural term() {
        Natural value = power();
        while ((skip_space(), consume('*'))) value *= power();
        return value;
    }

    Natural power() {
        Natural base = atom();
        skip_space();
        if (!consume('^')) return base;
        const Natural exponent = power();
        const auto e = exponent.to_u64();
        if (!e || (base > Natural(1) && *e > 1'000'000)) fail("exponent too large");
        return pow(base, *e);
    }

    Natural atom() {
        skip_space();
        if (consume('(')) {
            Natural value = expression();
            skip_space();
            if (!consume(')')) fail("missing ')'");
            return value;
        }
        const std::size_t start = pos_;
        if (text_.substr(pos_, 2) == "0x" || text_.substr(pos_, 2) == "0X") {
            pos_ += 2;
            while (pos_ < text_.size() && (std::isxdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        } else {
            while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        }
        if (pos_ == start) fail("expected a number");
        return Natural::parse(text_.substr(start, pos_ - start));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw InvalidArgument("cannot parse number '" + std::string(text_) + "': " + why + " at position " +
                              std::to_string(pos_));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Natural parse_number(std::string_view text) { return ExpressionParser(text).parse(); }

std::string format_decimal(double p) {
    if (!std::isfinite(p)) throw InternalError("non-finite probability");
    if (p == 0.0) return "0";
    const int exponent = static_cast<int>(std::floor(std::log10(std::fabs(p))));
    const int decimals = std::max(0, 11 - exponent);
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, p);
    return buffer;
}

std::vector<Outcome> run_trials(const Context& ctx, const std::function<Outcome(Rng&)>& one) {
    if (!ctx.trials_given) {
        Rng rng(ctx.seed);
        return {one(rng)};
    }
    std::vector<Outcome> rows(ctx.trials);
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(ctx.trials, 1));
    std::vector<std::future<void>> pending;
    for (std::size_t w = 0; w < workers; ++w) {
        pending.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < ctx.trials; i += workers) {
                Rng rng = derive_stream(ctx.seed, i);
                rows[i] = one(rng);
            }
        }));
    }
    for (auto& f : pending) f.get();
    return rows;
}

Outcome combine_trials(const Context& ctx, std::vector<Outcome> rows, Json summary) {
    if (!ctx.trials_given) return std::move(rows.front());
    Outcome combined;
    Json list = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Json row;
        row["trial"] = i;
        for (auto& [key, value] : rows[i].result.items()) row[key] = value;
        list.push_back(std::move(row));
        combined.exit_code = std::max(combined.exit_code, rows[i].exit_code);
    }
    combined.result["trials"] = std::move(list);
    combined.result["summary"] = std::move(summary);
    return combined;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

}  // namespace randbench::cli
