#pragma once

#include <string>

#include "tabtree/cell.hpp"

namespace tabtree {

struct CsvOptions {
    // Besides the empty field, the tokens "NaN" and "nan" also read as
    // missing when set.
    bool nan_as_missing = true;
};

// RFC 4180: quoted fields may contain commas, quotes (doubled) and newlines.
// Every cell reads as text except the missing tokens; numeric meaning
// emerges from parsing downstream.
Table parse_csv(const std::string& content, const CsvOptions& options = {});
Table read_csv(const std::string& path, const CsvOptions& options = {});

// Number cells render with 17 significant digits so equal values always
// produce equal bytes; missing cells become empty fields.
std::string format_csv(const Table& table);
void write_csv(const Table& table, const std::string& path);

}  // namespace tabtree
