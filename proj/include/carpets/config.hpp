#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "carpets/measure.hpp"
#include "carpets/scale.hpp"
#include "carpets/symbolic.hpp"

namespace carpets {

/// Parsed model definition from a flat key/value config file.
/// Keys: m, n, digits, measure.kind, measure.weights (explicit kind only).
struct MeasureSpec {
    enum class Kind { max_entropy, mcmullen, column_uniform, explicit_weights };
    Kind kind = Kind::max_entropy;
    std::vector<std::pair<Digit, double>> weights; // explicit kind only
};

struct CarpetConfig {
    int m = 0;
    int n = 0;
    std::vector<Digit> digits;
    MeasureSpec measure;
};

/// Parses a config file; errors carry "path:line: field: message" context,
/// first failure wins.
CarpetConfig parse_config_file(const std::string& path);
CarpetConfig parse_config_text(std::string_view text, const std::string& origin);

Carpet make_carpet(const CarpetConfig& cfg);
BernoulliMeasure make_measure(const CarpetConfig& cfg, const Carpet& c);

/// Scale argument: a decimal in (0,1), or an exact power token "m^-5",
/// "n^-12", or "<integer>^-<k>" with the integer equal to m or n.
Scale parse_scale_token(std::string_view token, const Carpet& c);

/// Code argument: "random:<seed>", "const:<i>,<j>", or an explicit digit
/// array "[[i,j],...]". Random and constant codes are generated to `length`;
/// explicit codes must already be at least that long.
Code parse_code_spec(std::string_view spec, const Carpet& c, const BernoulliMeasure& mu,
                     std::size_t length);

} // namespace carpets
