#include "carpets/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "carpets/experiment.hpp"

namespace carpets {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& field,
                       const std::string& message) {
    raise(errc::bad_config, origin + ":" + std::to_string(line) + ": " + field + ": " + message);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// tokenizer for bracket arrays: [ ] , and bare numbers
struct ArrayTokens {
    std::vector<std::string> tokens;

    static ArrayTokens lex(std::string_view text, const std::string& origin, int line,
                           const std::string& field) {
        ArrayTokens out;
        std::size_t p = 0;
        while (p < text.size()) {
            const char ch = text[p];
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++p;
            } else if (ch == '[' || ch == ']' || ch == ',') {
                out.tokens.emplace_back(1, ch);
                ++p;
            } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' ||
                       ch == '.') {
                std::size_t q = p;
                while (q < text.size() && (std::isalnum(static_cast<unsigned char>(text[q])) ||
                                           text[q] == '-' || text[q] == '+' || text[q] == '.'))
                    ++q;
                out.tokens.emplace_back(text.substr(p, q - p));
                p = q;
            } else {
                fail(origin, line, field, std::string("unexpected character '") + ch + "'");
            }
        }
        return out;
    }
};

class ArrayParser {
public:
    ArrayParser(std::string_view text, const std::string& origin, int line,
                const std::string& field)
        : origin_(origin), line_(line), field_(field),
          tokens_(ArrayTokens::lex(text, origin, line, field).tokens) {}

    // [[a,b],...] or [[a,b,c],...]
    std::vector<std::vector<double>> tuples(std::size_t arity) {
        expect("[");
        std::vector<std::vector<double>> out;
        if (peek() == "]") {
            next();
        } else {
            for (;;) {
                out.push_back(tuple(arity));
                const std::string t = next();
                if (t == "]")
                    break;
                if (t != ",")
                    fail(origin_, line_, field_, "expected ',' or ']', got '" + t + "'");
            }
        }
        if (pos_ != tokens_.size())
            fail(origin_, line_, field_, "trailing content after array");
        return out;
    }

private:
    std::vector<double> tuple(std::size_t arity) {
        expect("[");
        std::vector<double> vals;
        for (;;) {
            vals.push_back(number(next()));
            const std::string t = next();
            if (t == "]")
                break;
            if (t != ",")
                fail(origin_, line_, field_, "expected ',' or ']' in entry");
        }
        if (vals.size() != arity)
            fail(origin_, line_, field_, "expected entries of " + std::to_string(arity) +
                                             " numbers, got " + std::to_string(vals.size()));
        return vals;
    }

    double number(const std::string& t) {
        try {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size())
                throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            fail(origin_, line_, field_, "'" + t + "' is not a number");
        }
    }

    std::string next() {
        if (pos_ >= tokens_.size())
            fail(origin_, line_, field_, "unterminated array");
        return tokens_[pos_++];
    }

    const std::string& peek() {
        if (pos_ >= tokens_.size())
            fail(origin_, line_, field_, "unterminated array");
        return tokens_[pos_];
    }

    void expect(const std::string& t) {
        const std::string got = next();
        if (got != t)
            fail(origin_, line_, field_, "expected '" + t + "', got '" + got + "'");
    }

    std::string origin_;
    int line_;
    std::string field_;
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
};

int parse_int(std::string_view value, const std::string& origin, int line,
              const std::string& field) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        fail(origin, line, field, "'" + std::string(value) + "' is not an integer");
    return out;
}

Digit to_digit(const std::vector<double>& pair, const std::string& origin, int line,
               const std::string& field) {
    const int i = static_cast<int>(pair[0]);
    const int j = static_cast<int>(pair[1]);
    if (pair[0] != i || pair[1] != j)
        fail(origin, line, field, "digit coordinates must be integers");
    return Digit{i, j};
}

} // namespace

CarpetConfig parse_config_text(std::string_view text, const std::string& origin) {
    CarpetConfig cfg;
    bool seen_m = false, seen_n = false, seen_digits = false, seen_kind = false,
         seen_weights = false;
    int weights_line = 0;

    std::istringstream stream{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(stream, raw)) {
        ++line;
        std::string_view sv(raw);
        if (const auto hash = sv.find('#'); hash != std::string_view::npos)
            sv = sv.substr(0, hash);
        sv = trim(sv);
        if (sv.empty())
            continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            fail(origin, line, "line", "expected 'key = value'");
        const std::string key{trim(sv.substr(0, eq))};
        const std::string_view value = trim(sv.substr(eq + 1));
        if (value.empty())
            fail(origin, line, key, "empty value");

        if (key == "m") {
            cfg.m = parse_int(value, origin, line, key);
            seen_m = true;
        } else if (key == "n") {
            cfg.n = parse_int(value, origin, line, key);
            seen_n = true;
        } else if (key == "digits") {
            ArrayParser parser(value, origin, line, key);
            for (const auto& pair : parser.tuples(2))
                cfg.digits.push_back(to_digit(pair, origin, line, key));
            seen_digits = true;
        } else if (key == "measure.kind") {
            if (value == "max_entropy")
                cfg.measure.kind = MeasureSpec::Kind::max_entropy;
            else if (value == "mcmullen")
                cfg.measure.kind = MeasureSpec::Kind::mcmullen;
            else if (value == "column_uniform")
                cfg.measure.kind = MeasureSpec::Kind::column_uniform;
            else if (value == "explicit")
                cfg.measure.kind = MeasureSpec::Kind::explicit_weights;
            else
                fail(origin, line, key,
                     "'" + std::string(value) +
                         "' is not one of max_entropy|mcmullen|column_uniform|explicit");
            seen_kind = true;
        } else if (key == "measure.weights") {
            ArrayParser parser(value, origin, line, key);
            for (const auto& triple : parser.tuples(3))
                cfg.measure.weights.emplace_back(
                    to_digit({triple[0], triple[1]}, origin, line, key), triple[2]);
            seen_weights = true;
            weights_line = line;
        } else {
            fail(origin, line, key, "unknown key");
        }
    }

    if (!seen_m)
        fail(origin, line, "m", "missing");
    if (!seen_n)
        fail(origin, line, "n", "missing");
    if (!seen_digits)
        fail(origin, line, "digits", "missing");
    if (!seen_kind)
        fail(origin, line, "measure.kind", "missing");
    if (cfg.measure.kind == MeasureSpec::Kind::explicit_weights && !seen_weights)
        fail(origin, line, "measure.weights", "required for measure.kind = explicit");
    if (cfg.measure.kind != MeasureSpec::Kind::explicit_weights && seen_weights)
        fail(origin, weights_line, "measure.weights",
             "only allowed for measure.kind = explicit");
    return cfg;
}

CarpetConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(errc::bad_config, "cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

Carpet make_carpet(const CarpetConfig& cfg) { return Carpet::create(cfg.m, cfg.n, cfg.digits); }

BernoulliMeasure make_measure(const CarpetConfig& cfg, const Carpet& c) {
    switch (cfg.measure.kind) {
    case MeasureSpec::Kind::max_entropy:
        return BernoulliMeasure::max_entropy(c);
    case MeasureSpec::Kind::mcmullen:
        return BernoulliMeasure::mcmullen(c);
    case MeasureSpec::Kind::column_uniform:
        return BernoulliMeasure::column_uniform(c);
    case MeasureSpec::Kind::explicit_weights:
        return BernoulliMeasure::from_weights(c, cfg.measure.weights);
    }
    raise(errc::internal, "unhandled measure kind");
}

Scale parse_scale_token(std::string_view token, const Carpet& c) {
    token = trim(token);
    if (token.empty())
        raise(errc::bad_config, "empty scale token");
    const auto caret = token.find("^-");
    if (caret != std::string_view::npos) {
        const std::string_view base_part = token.substr(0, caret);
        const std::string_view exp_part = token.substr(caret + 2);
        int base = 0;
        if (base_part == "m")
            base = c.m();
        else if (base_part == "n")
            base = c.n();
        else {
            base = parse_int(base_part, "scale", 0, "base");
            if (base != c.m() && base != c.n())
                raise(errc::bad_config, "power scale base " + std::to_string(base) +
                                            " is neither m nor n of the carpet");
        }
        const int exponent = parse_int(exp_part, "scale", 0, "exponent");
        return Scale::power(base, exponent);
    }
    try {
        std::size_t used = 0;
        const double r = std::stod(std::string(token), &used);
        if (used != token.size())
            throw std::invalid_argument("trailing");
        return Scale::real(r);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        raise(errc::bad_config, "'" + std::string(token) + "' is not a scale");
    }
}

Code parse_code_spec(std::string_view spec, const Carpet& c, const BernoulliMeasure& mu,
                     std::size_t length) {
    spec = trim(spec);
    if (spec.rfind("random:", 0) == 0) {
        const std::string seed_text{spec.substr(7)};
        std::uint64_t seed = 0;
        const auto [ptr, ec] =
            std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
        if (ec != std::errc{} || ptr != seed_text.data() + seed_text.size())
            raise(errc::bad_config, "random code spec needs an integer seed");
        return sample_code(mu, length, CounterRng(seed, 0));
    }
    if (spec.rfind("const:", 0) == 0) {
        const std::string body{spec.substr(6)};
        const auto comma = body.find(',');
        if (comma == std::string::npos)
            raise(errc::bad_config, "const code spec must be const:<i>,<j>");
        const Digit d{parse_int(body.substr(0, comma), "code", 0, "i"),
                      parse_int(body.substr(comma + 1), "code", 0, "j")};
        if (!c.contains(d))
            raise(errc::bad_config, "digit " + to_string(d) + " is not in the carpet");
        return Code::constant(d, length);
    }
    if (!spec.empty() && spec.front() == '[') {
        ArrayParser parser(spec, "code", 0, "digits");
        std::vector<Digit> word;
        for (const auto& pair : parser.tuples(2)) {
            const Digit d = to_digit(pair, "code", 0, "digits");
            if (!c.contains(d))
                raise(errc::bad_config, "digit " + to_string(d) + " is not in the carpet");
            word.push_back(d);
        }
        if (word.size() < length)
            raise(errc::code_too_short, "explicit code has " + std::to_string(word.size()) +
                                            " letters, need " + std::to_string(length));
        return Code(std::move(word));
    }
    raise(errc::bad_config,
          "code spec must be random:<seed>, const:<i>,<j> or an explicit [[i,j],...] list");
}

} // namespace carpets
