#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tabtree {

// Transform parameter value. Bool is distinct from number so JSON round
// trips preserve the type.
using ParamValue = std::variant<bool, double, std::string, std::vector<double>>;

using ParamMap = std::map<std::string, ParamValue>;

inline ParamMap merge_params(ParamMap base, const ParamMap& overrides) {
    for (const auto& [k, v] : overrides) base[k] = v;
    return base;
}

double param_number(const ParamMap& p, const std::string& key, double fallback);
bool param_bool(const ParamMap& p, const std::string& key, bool fallback);
std::string param_string(const ParamMap& p, const std::string& key, const std::string& fallback);
std::optional<std::vector<double>> param_numbers(const ParamMap& p, const std::string& key);

}  // namespace tabtree
