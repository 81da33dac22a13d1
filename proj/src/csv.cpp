#include "tabtree/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tabtree {

namespace {

std::vector<std::vector<std::string>> split_records(const std::string& content,
                                                    std::vector<std::vector<bool>>* quoted_out) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::vector<bool> quoted_fields;
    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;

    auto end_field = [&]() {
        fields.push_back(std::move(field));
        quoted_fields.push_back(was_quoted);
        field.clear();
        was_quoted = false;
    };
    auto end_record = [&]() {
        end_field();
        records.push_back(std::move(fields));
        if (quoted_out) quoted_out->push_back(std::move(quoted_fields));
        fields.clear();
        quoted_fields.clear();
    };

    std::size_t i = 0;
    while (i < content.size()) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty() && !was_quoted) {
            in_quotes = true;
            was_quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
            end_record();
        } else if (c == '\n') {
            end_record();
        } else {
            field += c;
        }
        ++i;
    }
    if (in_quotes) throw std::runtime_error("csv: unterminated quoted field");
    if (!field.empty() || was_quoted || !fields.empty()) end_record();
    return records;
}

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

void append_field(std::string& out, const std::string& s) {
    if (!needs_quoting(s)) {
        out += s;
        return;
    }
    out += '"';
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

Table parse_csv(const std::string& content, const CsvOptions& options) {
    std::vector<std::vector<bool>> quoted;
    auto records = split_records(content, &quoted);
    if (records.empty()) throw std::runtime_error("csv: no header row");

    Table table;
    for (auto& header : records.front()) {
        ColumnData col;
        col.header = std::move(header);
        col.cells.reserve(records.size() - 1);
        table.columns.push_back(std::move(col));
    }

    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.columns.size()) {
            throw std::runtime_error("csv: row " + std::to_string(r + 1) + " has " +
                                     std::to_string(records[r].size()) + " fields, expected " +
                                     std::to_string(table.columns.size()));
        }
        for (std::size_t c = 0; c < records[r].size(); ++c) {
            std::string& value = records[r][c];
            bool was_quoted = quoted[r][c];
            if (!was_quoted && value.empty()) {
                table.columns[c].cells.push_back(CellValue::missing());
            } else if (!was_quoted && options.nan_as_missing &&
                       (value == "NaN" || value == "nan")) {
                table.columns[c].cells.push_back(CellValue::missing());
            } else {
                table.columns[c].cells.push_back(CellValue::text(std::move(value)));
            }
        }
    }
    return table;
}

Table read_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), options);
}

std::string format_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out += ',';
        append_field(out, table.columns[c].header);
    }
    out += '\n';

    std::size_t rows = table.row_count();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c > 0) out += ',';
            const CellValue& cell = table.columns[c].cells[r];
            if (cell.is_missing()) continue;
            if (cell.is_number()) {
                out += format_number(cell.number_value());
            } else {
                append_field(out, cell.text_value());
            }
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Table& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("csv: cannot write '" + path + "'");
    out << format_csv(table);
}

}  // namespace tabtree
