#include "tabtree/cell.hpp"

#include <cstdio>
#include <cstdlib>

namespace tabtree {

std::optional<double> CellValue::as_number() const {
    if (is_number()) return number_value();
    if (is_text()) return parse_number(text_value());
    return std::nullopt;
}

const ColumnData* Table::find(const std::string& header) const {
    for (const auto& c : columns) {
        if (c.header == header) return &c;
    }
    return nullptr;
}

ColumnData* Table::find(const std::string& header) {
    for (auto& c : columns) {
        if (c.header == header) return &c;
    }
    return nullptr;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

std::optional<double> parse_number(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end != begin + text.size()) return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

std::string level_key(const CellValue& cell) {
    if (cell.is_text()) return cell.text_value();
    if (cell.is_number()) return format_number(cell.number_value());
    return std::string();
}

bool is_integral(double v) {
    return std::isfinite(v) && v == std::floor(v);
}

}  // namespace tabtree
