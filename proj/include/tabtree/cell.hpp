#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tabtree {

// A single table cell: a 64-bit float, a text entry, or missing.
// Missing is a dedicated state, never a sentinel number, so it can serve as
// an infill target without colliding with legitimate values (including 0).
class CellValue {
public:
    struct Missing {
        bool operator==(const Missing&) const = default;
    };

    CellValue() : value_(Missing{}) {}
    explicit CellValue(double number) : value_(number) {}
    explicit CellValue(std::string text) : value_(std::move(text)) {}

    static CellValue missing() { return CellValue(); }
    static CellValue number(double v) { return CellValue(v); }
    static CellValue text(std::string t) { return CellValue(std::move(t)); }

    bool is_missing() const { return std::holds_alternative<Missing>(value_); }
    bool is_number() const { return std::holds_alternative<double>(value_); }
    bool is_text() const { return std::holds_alternative<std::string>(value_); }

    double number_value() const { return std::get<double>(value_); }
    const std::string& text_value() const { return std::get<std::string>(value_); }

    // Numeric view: a number cell, or a text cell whose full content parses
    // as a finite double. Missing and non-numeric text yield nullopt.
    std::optional<double> as_number() const;

    bool operator==(const CellValue& other) const = default;

private:
    std::variant<Missing, double, std::string> value_;
};

enum class ColumnRole { train, test };

// One feature column. Cell order is significant: sequential transforms
// (dxdt family) and adjacent-cell infill rely on it.
struct ColumnData {
    std::string header;
    std::vector<CellValue> cells;
    ColumnRole role = ColumnRole::train;

    std::size_t size() const { return cells.size(); }

    bool operator==(const ColumnData& other) const = default;
};

// Column-major table.
struct Table {
    std::vector<ColumnData> columns;

    std::size_t row_count() const { return columns.empty() ? 0 : columns.front().size(); }
    const ColumnData* find(const std::string& header) const;
    ColumnData* find(const std::string& header);

    bool operator==(const Table& other) const = default;
};

// Canonical text form of a number: shortest-ish fixed rule (17 significant
// digits) so equal doubles always render to equal bytes.
std::string format_number(double v);

// Full-string parse of a finite double; rejects trailing garbage.
std::optional<double> parse_number(const std::string& text);

// Canonical categoric level key for a cell (text as-is, numbers via
// format_number). Missing cells have no key and must be handled by callers.
std::string level_key(const CellValue& cell);

// True when the value is integral (within exact double semantics).
bool is_integral(double v);

}  // namespace tabtree
