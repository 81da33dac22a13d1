#include "tabtree/binning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tabtree/categoric.hpp"

namespace tabtree {

const char* bin_variant_name(BinVariant v) {
    switch (v) {
        case BinVariant::stdev: return "stdev";
        case BinVariant::pwrs: return "pwrs";
        case BinVariant::pwr2: return "pwr2";
        case BinVariant::fixed_width: return "fixed_width";
        case BinVariant::equal_population: return "equal_population";
        case BinVariant::user_open: return "user_open";
        case BinVariant::user_bounded: return "user_bounded";
    }
    return "?";
}

const char* bin_mode_name(BinOutputMode m) {
    switch (m) {
        case BinOutputMode::onehot: return "onehot";
        case BinOutputMode::ordinal: return "ordinal";
        case BinOutputMode::binary: return "binary";
    }
    return "?";
}

bool bin_input_valid(BinVariant v, const CellValue& cell) {
    auto num = cell.as_number();
    if (!num) return false;
    if (v == BinVariant::pwrs) return *num > 0.0;
    if (v == BinVariant::pwr2) return *num != 0.0;
    return true;
}

namespace {

// floor(log10(x)) for x > 0 with integer correction against float fuzz at
// exact powers of ten.
int decade_floor(double x) {
    int f = static_cast<int>(std::floor(std::log10(x)));
    while (std::pow(10.0, f + 1) <= x) ++f;
    while (std::pow(10.0, f) > x) --f;
    return f;
}

std::vector<double> strictly_increasing(std::vector<double> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

std::string range_label(double lo, double hi, bool lo_open, bool hi_open) {
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string(buf);
    };
    std::string l = lo_open ? "(-inf" : "[" + fmt(lo);
    std::string h = hi_open ? "inf)" : fmt(hi) + ")";
    return l + "," + h;
}

void build_labels(BinBasis& b) {
    b.labels.clear();
    if (b.open_ended) {
        for (int i = 0; i <= static_cast<int>(b.edges.size()); ++i) {
            bool lo_open = i == 0;
            bool hi_open = i == static_cast<int>(b.edges.size());
            double lo = lo_open ? 0.0 : b.edges[i - 1];
            double hi = hi_open ? 0.0 : b.edges[i];
            b.labels.push_back(range_label(lo, hi, lo_open, hi_open));
        }
    } else {
        for (std::size_t i = 0; i + 1 < b.edges.size(); ++i) {
            b.labels.push_back(range_label(b.edges[i], b.edges[i + 1], false, false));
        }
    }
}

}  // namespace

BinBasis fit_bins(BinVariant variant, BinOutputMode mode, const ColumnData& column,
                  const ParamMap& params) {
    std::vector<double> vals;
    for (const auto& cell : column.cells) {
        if (bin_input_valid(variant, cell)) vals.push_back(*cell.as_number());
    }
    if (vals.empty()) {
        throw std::runtime_error("fit_bins: column '" + column.header +
                                 "' has no valid entry for variant " + bin_variant_name(variant));
    }
    std::sort(vals.begin(), vals.end());
    double lo = vals.front();
    double hi = vals.back();

    BinBasis b;
    b.variant = variant;
    b.mode = mode;
    b.open_ended = variant != BinVariant::user_bounded;

    switch (variant) {
        case BinVariant::stdev: {
            int bincount = static_cast<int>(param_number(params, "bincount", 6));
            if (bincount < 2) throw std::runtime_error("fit_bins: bincount must be >= 2");
            if (bincount % 2 != 0) {
                throw std::runtime_error("fit_bins: stdev bins require an even bincount, got " +
                                         std::to_string(bincount));
            }
            double sum = 0.0;
            for (double v : vals) sum += v;
            double mu = sum / static_cast<double>(vals.size());
            double sq = 0.0;
            for (double v : vals) sq += (v - mu) * (v - mu);
            double sigma = std::sqrt(sq / static_cast<double>(vals.size()));
            for (int k = -(bincount / 2 - 1); k <= bincount / 2 - 1; ++k) {
                b.edges.push_back(mu + k * sigma);
            }
            break;
        }
        case BinVariant::pwrs: {
            int f_lo = decade_floor(lo);
            int f_hi = decade_floor(hi);
            for (int k = f_lo; k <= f_hi + 1; ++k) b.edges.push_back(std::pow(10.0, k));
            break;
        }
        case BinVariant::pwr2: {
            for (double v : vals) {
                if (v > 0.0) {
                    int f = decade_floor(v);
                    b.edges.push_back(std::pow(10.0, f));
                    b.edges.push_back(std::pow(10.0, f + 1));
                } else {
                    int f = decade_floor(-v);
                    b.edges.push_back(-std::pow(10.0, f));
                    b.edges.push_back(-std::pow(10.0, f + 1));
                }
            }
            break;
        }
        case BinVariant::fixed_width: {
            double width = param_number(params, "width", 0.0);
            if (width == 0.0) width = hi > lo ? (hi - lo) / 6.0 : 1.0;
            if (width <= 0.0) throw std::runtime_error("fit_bins: width must be positive");
            int m = static_cast<int>(std::floor((hi - lo) / width));
            for (int i = 1; i <= m; ++i) b.edges.push_back(lo + i * width);
            break;
        }
        case BinVariant::equal_population: {
            int bincount = static_cast<int>(param_number(params, "bincount", 6));
            if (bincount < 2) throw std::runtime_error("fit_bins: bincount must be >= 2");
            std::size_t n = vals.size();
            for (int k = 1; k < bincount; ++k) {
                std::size_t r = (static_cast<std::size_t>(k) * n) / bincount;
                if (r == 0 || r >= n) continue;
                b.edges.push_back(0.5 * (vals[r - 1] + vals[r]));
            }
            break;
        }
        case BinVariant::user_open:
        case BinVariant::user_bounded: {
            auto buckets = param_numbers(params, "buckets");
            if (!buckets || buckets->size() < 2) {
                throw std::runtime_error("fit_bins: user bins need a `buckets` list of >= 2 edges");
            }
            b.edges = *buckets;
            break;
        }
    }

    b.edges = strictly_increasing(std::move(b.edges));
    if (b.edges.empty()) {
        // Fully degenerate data (e.g. constant column for equal population):
        // a single edge at the value still yields a usable two-bin split.
        b.edges.push_back(lo);
    }
    b.bin_count = b.open_ended ? static_cast<int>(b.edges.size()) + 1
                               : static_cast<int>(b.edges.size()) - 1;
    build_labels(b);

    switch (mode) {
        case BinOutputMode::onehot: b.column_count = b.bin_count; break;
        case BinOutputMode::ordinal: b.column_count = 1; break;
        case BinOutputMode::binary: b.column_count = bits_for_codes(b.bin_count + 1); break;
    }
    return b;
}

int bin_index(const BinBasis& basis, double value) {
    // Number of edges <= value, so a boundary value lands in the upper bin.
    auto it = std::upper_bound(basis.edges.begin(), basis.edges.end(), value);
    int rank = static_cast<int>(it - basis.edges.begin());
    if (basis.open_ended) return rank;
    if (rank == 0 || rank > static_cast<int>(basis.edges.size()) - 1) return -1;
    return rank - 1;
}

std::vector<bool> bin_invalid_rows(const BinBasis& basis, const ColumnData& column) {
    std::vector<bool> invalid(column.size(), false);
    for (std::size_t i = 0; i < column.size(); ++i) {
        const auto& cell = column.cells[i];
        if (!bin_input_valid(basis.variant, cell)) {
            invalid[i] = true;
            continue;
        }
        if (!basis.open_ended && bin_index(basis, *cell.as_number()) < 0) {
            invalid[i] = true;
        }
    }
    return invalid;
}

std::vector<ColumnData> apply_bins(const BinBasis& basis, const ColumnData& column,
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

    for (std::size_t i = 0; i < n; ++i) {
        const auto& cell = column.cells[i];
        int idx = -1;
        if (bin_input_valid(basis.variant, cell)) idx = bin_index(basis, *cell.as_number());
        bool unseen = idx < 0;
        switch (basis.mode) {
            case BinOutputMode::ordinal:
                out[0].cells[i] =
                    CellValue::number(static_cast<double>(unseen ? basis.bin_count : idx));
                break;
            case BinOutputMode::onehot:
                if (!unseen) out[idx].cells[i] = CellValue::number(1.0);
                break;
            case BinOutputMode::binary: {
                int code = unseen ? basis.bin_count : idx;
                for (int bit = 0; bit < basis.column_count; ++bit) {
                    int shift = basis.column_count - 1 - bit;
                    out[bit].cells[i] = CellValue::number(((code >> shift) & 1) ? 1.0 : 0.0);
                }
                break;
            }
        }
    }
    return out;
}

}  // namespace tabtree
