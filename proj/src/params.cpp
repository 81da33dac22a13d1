#include "tabtree/params.hpp"

namespace tabtree {

double param_number(const ParamMap& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    if (const double* d = std::get_if<double>(&it->second)) return *d;
    if (const bool* b = std::get_if<bool>(&it->second)) return *b ? 1.0 : 0.0;
    return fallback;
}

bool param_bool(const ParamMap& p, const std::string& key, bool fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    if (const bool* b = std::get_if<bool>(&it->second)) return *b;
    if (const double* d = std::get_if<double>(&it->second)) return *d != 0.0;
    return fallback;
}

std::string param_string(const ParamMap& p, const std::string& key, const std::string& fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    if (const std::string* s = std::get_if<std::string>(&it->second)) return *s;
    return fallback;
}

std::optional<std::vector<double>> param_numbers(const ParamMap& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) return std::nullopt;
    if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
    return std::nullopt;
}

}  // namespace tabtree
