#include "tabtree/categoric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace tabtree {

const char* cat_variant_name(CatVariant v) {
    switch (v) {
        case CatVariant::bnry: return "bnry";
        case CatVariant::ordl: return "ordl";
        case CatVariant::ord3: return "ord3";
        case CatVariant::onht: return "onht";
        case CatVariant::code1010: return "1010";
    }
    return "?";
}

std::optional<CatVariant> cat_variant_from_name(const std::string& name) {
    for (CatVariant v : {CatVariant::bnry, CatVariant::ordl, CatVariant::ord3, CatVariant::onht,
                         CatVariant::code1010}) {
        if (name == cat_variant_name(v)) return v;
    }
    return std::nullopt;
}

int bits_for_codes(int codes) {
    int need = std::max(codes, 2);
    int bits = 0;
    int capacity = 1;
    while (capacity < need) {
        capacity *= 2;
        ++bits;
    }
    return bits;
}

CatBasis fit_encoding(CatVariant variant, const ColumnData& column) {
    std::map<std::string, std::size_t> freq;
    for (const auto& cell : column.cells) {
        if (cell.is_missing()) continue;
        ++freq[level_key(cell)];
    }
    if (freq.empty()) {
        throw std::runtime_error("fit_encoding: column '" + column.header + "' has no valid entry");
    }

    CatBasis b;
    b.variant = variant;
    // std::map iteration is already the lexicographic order.
    for (const auto& [level, count] : freq) b.levels.push_back(level);

    if (variant == CatVariant::ord3) {
        std::stable_sort(b.levels.begin(), b.levels.end(),
                         [&](const std::string& a, const std::string& c) {
                             if (freq.at(a) != freq.at(c)) return freq.at(a) > freq.at(c);
                             return a < c;
                         });
    }

    int k = static_cast<int>(b.levels.size());
    switch (variant) {
        case CatVariant::bnry: {
            if (k > 2) {
                throw std::runtime_error("fit_encoding: column '" + column.header + "' has " +
                                         std::to_string(k) +
                                         " distinct levels; bnry accepts at most 2 (consider onht or 1010)");
            }
            b.column_count = 1;
            // No spare code exists, so unseen/missing falls back to the most
            // frequent level (lexicographic first on ties).
            int mode_code = 0;
            std::size_t best = 0;
            for (int i = 0; i < k; ++i) {
                if (freq[b.levels[i]] > best) {
                    best = freq[b.levels[i]];
                    mode_code = i;
                }
            }
            b.unseen_code = mode_code;
            break;
        }
        case CatVariant::ordl:
        case CatVariant::ord3:
            b.column_count = 1;
            b.unseen_code = k;
            break;
        case CatVariant::onht:
            b.column_count = k;
            b.unseen_code = -1;
            break;
        case CatVariant::code1010:
            // Levels plus one reserved unseen pattern.
            b.column_count = bits_for_codes(k + 1);
            b.unseen_code = k;
            break;
    }
    return b;
}

namespace {

std::map<std::string, int> build_code_map(const CatBasis& b) {
    std::map<std::string, int> codes;
    for (std::size_t i = 0; i < b.levels.size(); ++i) {
        codes[b.levels[i]] = static_cast<int>(i);
    }
    return codes;
}

int code_of(const std::map<std::string, int>& codes, int unseen, const CellValue& cell) {
    if (cell.is_missing()) return unseen;
    auto it = codes.find(level_key(cell));
    return it == codes.end() ? unseen : it->second;
}

}  // namespace

std::vector<ColumnData> apply_encoding(const CatBasis& basis, const ColumnData& column,
                                       const std::string& out_base) {
    std::size_t n = column.size();
    std::vector<ColumnData> out(static_cast<std::size_t>(basis.column_count));
    for (int c = 0; c < basis.column_count; ++c) {
        out[c].header = basis.column_count == 1
                            ? out_base
                            : out_base + kSeparator + std::to_string(c);
        out[c].role = column.role;
        out[c].cells.assign(n, CellValue::number(0.0));
    }

    auto codes = build_code_map(basis);
    for (std::size_t i = 0; i < n; ++i) {
        int code = code_of(codes, basis.unseen_code, column.cells[i]);
        switch (basis.variant) {
            case CatVariant::bnry:
            case CatVariant::ordl:
            case CatVariant::ord3:
                out[0].cells[i] = CellValue::number(static_cast<double>(code));
                break;
            case CatVariant::onht:
                if (code >= 0 && code < basis.column_count) {
                    out[code].cells[i] = CellValue::number(1.0);
                }
                break;
            case CatVariant::code1010:
                // Most significant bit first.
                for (int bit = 0; bit < basis.column_count; ++bit) {
                    int shift = basis.column_count - 1 - bit;
                    out[bit].cells[i] = CellValue::number(((code >> shift) & 1) ? 1.0 : 0.0);
                }
                break;
        }
    }
    return out;
}

std::vector<bool> encoding_invalid_rows(const CatBasis& basis, const ColumnData& column) {
    auto codes = build_code_map(basis);
    std::vector<bool> invalid(column.size(), false);
    for (std::size_t i = 0; i < column.size(); ++i) {
        const auto& cell = column.cells[i];
        invalid[i] = cell.is_missing() || codes.find(level_key(cell)) == codes.end();
    }
    return invalid;
}

CellValue invert_encoding(const CatBasis& basis, const std::vector<CellValue>& row) {
    int code = -1;
    switch (basis.variant) {
        case CatVariant::bnry:
        case CatVariant::ordl:
        case CatVariant::ord3: {
            auto v = row.at(0).as_number();
            if (!v) return CellValue::missing();
            code = static_cast<int>(std::llround(*v));
            break;
        }
        case CatVariant::onht: {
            for (std::size_t c = 0; c < row.size(); ++c) {
                auto v = row[c].as_number();
                if (v && std::llround(*v) == 1) {
                    code = static_cast<int>(c);
                    break;
                }
            }
            if (code < 0) return CellValue::missing();
            break;
        }
        case CatVariant::code1010: {
            code = 0;
            for (std::size_t c = 0; c < row.size(); ++c) {
                auto v = row[c].as_number();
                if (!v) return CellValue::missing();
                code = code * 2 + (std::llround(*v) == 1 ? 1 : 0);
            }
            break;
        }
    }
    if (code < 0 || code >= static_cast<int>(basis.levels.size())) return CellValue::missing();
    return CellValue::text(basis.levels[code]);
}

}  // namespace tabtree
