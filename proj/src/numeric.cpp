#include "tabtree/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tabtree {

const char* norm_variant_name(NormVariant v) {
    switch (v) {
        case NormVariant::nmbr: return "nmbr";
        case NormVariant::mnmx: return "mnmx";
        case NormVariant::mean: return "mean";
        case NormVariant::mad3: return "MAD3";
        case NormVariant::lgnm: return "lgnm";
        case NormVariant::retn: return "retn";
    }
    return "?";
}

std::optional<NormVariant> norm_variant_from_name(const std::string& name) {
    for (NormVariant v : {NormVariant::nmbr, NormVariant::mnmx, NormVariant::mean,
                          NormVariant::mad3, NormVariant::lgnm, NormVariant::retn}) {
        if (name == norm_variant_name(v)) return v;
    }
    return std::nullopt;
}

bool norm_input_valid(NormVariant v, const CellValue& cell) {
    auto num = cell.as_number();
    if (!num) return false;
    if (v == NormVariant::lgnm) return *num > 0.0;
    return true;
}

namespace {

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Values a variant actually normalizes: raw for most, ln(x) for lgnm.
std::vector<double> working_values(NormVariant v, const ColumnData& column) {
    std::vector<double> out;
    out.reserve(column.size());
    for (const auto& cell : column.cells) {
        if (!norm_input_valid(v, cell)) continue;
        double x = *cell.as_number();
        out.push_back(v == NormVariant::lgnm ? std::log(x) : x);
    }
    return out;
}

double transform_one(const NormBasis& b, double x) {
    switch (b.variant) {
        case NormVariant::nmbr:
            return (x - b.mu) / b.sigma;
        case NormVariant::mnmx: {
            double out = (x - b.min) / (b.max - b.min);
            if (b.cap_enabled && out > 1.0) out = 1.0;
            if (b.floor_enabled && out < 0.0) out = 0.0;
            return out;
        }
        case NormVariant::mean:
            return (x - b.mu) / (b.max - b.min);
        case NormVariant::mad3:
            // Printed formula subtracts the max; the center=median parameter
            // switches to the median (stored in b.mu at fit time).
            return (x - b.mu) / b.mad;
        case NormVariant::lgnm:
            return (std::log(x) - b.mu) / b.sigma;
        case NormVariant::retn:
            if (b.min <= 0.0 && b.max >= 0.0) return x / (b.max - b.min);
            if (b.min > 0.0) return (x - b.min) / (b.max - b.min);
            return (x - b.max) / (b.max - b.min);
    }
    return 0.0;
}

}  // namespace

NormBasis fit_norm(NormVariant variant, const ColumnData& column, const ParamMap& params) {
    std::vector<double> vals = working_values(variant, column);
    if (vals.empty()) {
        throw std::runtime_error(std::string("fit_norm: column '") + column.header +
                                 "' has no valid entry for variant " + norm_variant_name(variant));
    }

    NormBasis b;
    b.variant = variant;
    double sum = 0.0;
    for (double v : vals) sum += v;
    double mu = sum / static_cast<double>(vals.size());
    double sq = 0.0;
    for (double v : vals) sq += (v - mu) * (v - mu);
    double sigma = std::sqrt(sq / static_cast<double>(vals.size()));

    b.mu = mu;
    b.sigma = sigma;
    b.min = *std::min_element(vals.begin(), vals.end());
    b.max = *std::max_element(vals.begin(), vals.end());
    b.median = median_of(vals);

    if (variant == NormVariant::mad3) {
        std::vector<double> dev;
        dev.reserve(vals.size());
        for (double v : vals) dev.push_back(std::fabs(v - b.median));
        b.mad = median_of(std::move(dev));
        // Table formula centers on max; center=median opts into the
        // likely-intended variant. The chosen center is carried in mu.
        b.mu = param_string(params, "center", "max") == "median" ? b.median : b.max;
    }
    if (variant == NormVariant::mnmx) {
        b.cap_enabled = param_bool(params, "cap", false);
        b.floor_enabled = param_bool(params, "floor", false);
    }

    // Degenerate denominators become 1: constant columns map to centered
    // zeros instead of crashing, and the inverse still recovers them.
    if (b.sigma == 0.0 && (variant == NormVariant::nmbr || variant == NormVariant::lgnm)) {
        b.sigma = 1.0;
    }
    if (b.max == b.min &&
        (variant == NormVariant::mnmx || variant == NormVariant::mean || variant == NormVariant::retn)) {
        b.max = b.min + 1.0;
    }
    if (b.mad == 0.0 && variant == NormVariant::mad3) {
        b.mad = 1.0;
    }

    double fsum = 0.0;
    for (double v : vals) fsum += transform_one(b, variant == NormVariant::lgnm ? std::exp(v) : v);
    b.fill = fsum / static_cast<double>(vals.size());
    return b;
}

ColumnData apply_norm(const NormBasis& basis, const ColumnData& column, const std::string& out_header) {
    ColumnData out;
    out.header = out_header;
    out.role = column.role;
    out.cells.reserve(column.size());
    for (const auto& cell : column.cells) {
        if (!norm_input_valid(basis.variant, cell)) {
            out.cells.push_back(CellValue::missing());
        } else {
            out.cells.push_back(CellValue::number(transform_one(basis, *cell.as_number())));
        }
    }
    return out;
}

CellValue invert_norm(const NormBasis& basis, const CellValue& cell) {
    auto num = cell.as_number();
    if (!num) return CellValue::missing();
    double y = *num;
    switch (basis.variant) {
        case NormVariant::nmbr:
            return CellValue::number(y * basis.sigma + basis.mu);
        case NormVariant::mnmx:
            return CellValue::number(y * (basis.max - basis.min) + basis.min);
        case NormVariant::mean:
            return CellValue::number(y * (basis.max - basis.min) + basis.mu);
        case NormVariant::mad3:
            return CellValue::number(y * basis.mad + basis.mu);
        case NormVariant::lgnm:
            return CellValue::number(std::exp(y * basis.sigma + basis.mu));
        case NormVariant::retn:
            if (basis.min <= 0.0 && basis.max >= 0.0) {
                return CellValue::number(y * (basis.max - basis.min));
            }
            if (basis.min > 0.0) {
                return CellValue::number(y * (basis.max - basis.min) + basis.min);
            }
            return CellValue::number(y * (basis.max - basis.min) + basis.max);
    }
    return CellValue::missing();
}

namespace {

ColumnData dxdt_once(const ColumnData& column, int periods, const std::string& out_header) {
    ColumnData out;
    out.header = out_header;
    out.role = column.role;
    std::size_t n = column.size();
    out.cells.assign(n, CellValue::missing());
    for (std::size_t i = 0; i < n; ++i) {
        if (i < static_cast<std::size_t>(periods)) continue;
        auto cur = column.cells[i].as_number();
        auto prev = column.cells[i - periods].as_number();
        if (cur && prev) out.cells[i] = CellValue::number(*cur - *prev);
    }
    return out;
}

}  // namespace

ColumnData compute_dxdt(const ColumnData& column, int periods, int order, const std::string& out_header) {
    if (periods < 1 || order < 1) {
        throw std::runtime_error("compute_dxdt: periods and order must be positive");
    }
    ColumnData out = dxdt_once(column, periods, out_header);
    for (int k = 1; k < order; ++k) {
        out = dxdt_once(out, periods, out_header);
    }
    return out;
}

ColumnData compute_dxd2(const ColumnData& column, int periods, int window, const std::string& out_header) {
    if (periods < 1 || window < 1) {
        throw std::runtime_error("compute_dxd2: periods and window must be positive");
    }
    ColumnData out;
    out.header = out_header;
    out.role = column.role;
    std::size_t n = column.size();
    out.cells.assign(n, CellValue::missing());

    auto window_mean = [&](std::size_t end_idx) -> std::optional<double> {
        // Trailing window [end_idx - window + 1, end_idx].
        if (end_idx + 1 < static_cast<std::size_t>(window)) return std::nullopt;
        double sum = 0.0;
        for (int k = 0; k < window; ++k) {
            auto v = column.cells[end_idx - k].as_number();
            if (!v) return std::nullopt;
            sum += *v;
        }
        return sum / window;
    };

    for (std::size_t i = 0; i < n; ++i) {
        if (i < static_cast<std::size_t>(periods)) continue;
        auto cur = window_mean(i);
        auto prev = window_mean(i - periods);
        if (cur && prev) out.cells[i] = CellValue::number(*cur - *prev);
    }
    return out;
}

}  // namespace tabtree
