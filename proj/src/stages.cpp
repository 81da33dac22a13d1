#include "tabtree/stages.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "tabtree/binning.hpp"
#include "tabtree/categoric.hpp"
#include "tabtree/infill.hpp"
#include "tabtree/noise.hpp"
#include "tabtree/numeric.hpp"

namespace tabtree {

namespace {

const std::set<std::string>& fit_fn_ids() {
    static const std::set<std::string> ids = {
        "nmbr", "mnmx", "mean", "MAD3", "lgnm", "retn",
        "bnry", "ordl", "ord3", "onht", "1010",
        "bins", "dxdt", "dxd2",
        "noise_numeric", "noise_flip", "NArw", "excl",
    };
    return ids;
}

void fill_missing(ColumnData& col, std::vector<bool>& invalid, double fill) {
    invalid.resize(col.size(), false);
    for (std::size_t i = 0; i < col.size(); ++i) {
        if (col.cells[i].is_missing()) {
            invalid[i] = true;
            col.cells[i] = CellValue::number(fill);
        }
    }
}

BinVariant bin_variant_from_params(const ParamMap& params) {
    std::string name = param_string(params, "bin_variant", "stdev");
    for (BinVariant v : {BinVariant::stdev, BinVariant::pwrs, BinVariant::pwr2,
                         BinVariant::fixed_width, BinVariant::equal_population,
                         BinVariant::user_open, BinVariant::user_bounded}) {
        if (name == bin_variant_name(v)) return v;
    }
    throw std::runtime_error("stages: unknown bin_variant '" + name + "'");
}

BinOutputMode bin_mode_from_params(const ParamMap& params) {
    std::string name = param_string(params, "bin_mode", "onehot");
    for (BinOutputMode m : {BinOutputMode::onehot, BinOutputMode::ordinal, BinOutputMode::binary}) {
        if (name == bin_mode_name(m)) return m;
    }
    throw std::runtime_error("stages: unknown bin_mode '" + name + "'");
}

NoiseRange noise_range_from_params(const ParamMap& params) {
    std::string name = param_string(params, "noise_range", "none");
    if (name == "none") return NoiseRange::none;
    if (name == "unit") return NoiseRange::unit_interval;
    if (name == "retn") return NoiseRange::fitted_range;
    throw std::runtime_error("stages: unknown noise_range '" + name + "'");
}

int flip_level_count(const ColumnData& input) {
    // Codes observed in the train input; the stage sits downstream of an
    // ordinal encoding so entries are small nonnegative integers.
    double max_code = -1.0;
    for (const auto& cell : input.cells) {
        auto v = cell.as_number();
        if (v && is_integral(*v) && *v >= 0.0) max_code = std::max(max_code, *v);
    }
    return max_code < 0.0 ? 1 : static_cast<int>(max_code) + 1;
}

Rng& require_rng(const StageContext& ctx) {
    if (!ctx.rng) throw std::runtime_error("stages: noise stage requires an rng stream");
    return *ctx.rng;
}

}  // namespace

bool stage_fit_fn_exists(const std::string& id) { return fit_fn_ids().count(id) > 0; }
bool stage_apply_fn_exists(const std::string& id) { return fit_fn_ids().count(id) > 0; }

bool stage_invert_fn_exists(const std::string& id) {
    return id == "norm" || id == "encoding" || id == "identity";
}

int stage_static_column_count(const std::string& id) {
    if (id == "onht" || id == "1010" || id == "bins") return -1;
    return 1;
}

StageFitResult stage_fit(const std::string& fn_id, const ColumnData& input,
                         const std::string& out_base, const ParamMap& params,
                         const StageContext& ctx) {
    StageFitResult r;
    if (auto variant = norm_variant_from_name(fn_id)) {
        NormBasis basis = fit_norm(*variant, input, params);
        ColumnData out = apply_norm(basis, input, out_base);
        fill_missing(out, r.invalid, basis.fill);
        r.cols = {std::move(out)};
        r.stats = basis;
        return r;
    }
    if (auto variant = cat_variant_from_name(fn_id)) {
        CatBasis basis = fit_encoding(*variant, input);
        r.invalid = encoding_invalid_rows(basis, input);
        r.cols = apply_encoding(basis, input, out_base);
        r.column_count = basis.column_count;
        r.stats = basis;
        return r;
    }
    if (fn_id == "bins") {
        BinBasis basis = fit_bins(bin_variant_from_params(params), bin_mode_from_params(params),
                                  input, params);
        r.invalid = bin_invalid_rows(basis, input);
        r.cols = apply_bins(basis, input, out_base);
        r.column_count = basis.column_count;
        r.stats = basis;
        return r;
    }
    if (fn_id == "dxdt" || fn_id == "dxd2") {
        int periods = static_cast<int>(param_number(params, "periods", 1));
        ColumnData out;
        DeltaBasis basis;
        if (fn_id == "dxdt") {
            int order = static_cast<int>(param_number(params, "order", 1));
            out = compute_dxdt(input, periods, order, out_base);
        } else {
            int window = static_cast<int>(param_number(params, "window", 2));
            out = compute_dxd2(input, periods, window, out_base);
            basis.smoothed = true;
        }
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& cell : out.cells) {
            auto v = cell.as_number();
            if (v) {
                sum += *v;
                ++count;
            }
        }
        basis.fill = count > 0 ? sum / static_cast<double>(count) : 0.0;
        fill_missing(out, r.invalid, basis.fill);
        r.cols = {std::move(out)};
        r.stats = basis;
        return r;
    }
    if (fn_id == "noise_numeric") {
        NoiseNumericBasis basis = fit_numeric_noise(noise_range_from_params(params), input);
        NoiseParams np = noise_params_from(params);
        ColumnData out = inject_numeric(input, basis, np, require_rng(ctx), ctx.traindata);
        out.header = out_base;
        fill_missing(out, r.invalid, 0.0);
        r.cols = {std::move(out)};
        r.stats = basis;
        return r;
    }
    if (fn_id == "noise_flip") {
        NoiseFlipBasis basis;
        basis.level_count = flip_level_count(input);
        NoiseParams np = noise_params_from(params);
        ColumnData out =
            inject_categoric_flip(input, basis.level_count, np, require_rng(ctx), ctx.traindata);
        out.header = out_base;
        fill_missing(out, r.invalid, 0.0);
        r.cols = {std::move(out)};
        r.stats = basis;
        return r;
    }
    if (fn_id == "NArw") {
        MarkerBasis basis{ctx.root_narowtype};
        NArowMask mask = compute_narw_mask(input, ctx.root_narowtype);
        ColumnData out;
        out.header = out_base;
        out.role = input.role;
        out.cells.reserve(mask.flags.size());
        for (bool f : mask.flags) out.cells.push_back(CellValue::number(f ? 1.0 : 0.0));
        r.invalid.assign(out.size(), false);
        r.cols = {std::move(out)};
        r.stats = basis;
        return r;
    }
    if (fn_id == "excl") {
        ColumnData out = input;
        out.header = out_base;
        r.invalid.assign(out.size(), false);
        r.cols = {std::move(out)};
        r.stats = PassthroughBasis{};
        return r;
    }
    throw std::runtime_error("stages: unknown transform function '" + fn_id + "'");
}

StageApplyResult stage_apply(const std::string& fn_id, const BasisStats& stats,
                             const ColumnData& input, const std::string& out_base,
                             const ParamMap& params, const StageContext& ctx) {
    StageApplyResult r;
    if (norm_variant_from_name(fn_id)) {
        const auto& basis = std::get<NormBasis>(stats);
        ColumnData out = apply_norm(basis, input, out_base);
        fill_missing(out, r.invalid, basis.fill);
        r.cols = {std::move(out)};
        return r;
    }
    if (cat_variant_from_name(fn_id)) {
        const auto& basis = std::get<CatBasis>(stats);
        r.invalid = encoding_invalid_rows(basis, input);
        r.cols = apply_encoding(basis, input, out_base);
        return r;
    }
    if (fn_id == "bins") {
        const auto& basis = std::get<BinBasis>(stats);
        r.invalid = bin_invalid_rows(basis, input);
        r.cols = apply_bins(basis, input, out_base);
        return r;
    }
    if (fn_id == "dxdt" || fn_id == "dxd2") {
        const auto& basis = std::get<DeltaBasis>(stats);
        int periods = static_cast<int>(param_number(params, "periods", 1));
        ColumnData out;
        if (fn_id == "dxdt") {
            int order = static_cast<int>(param_number(params, "order", 1));
            out = compute_dxdt(input, periods, order, out_base);
        } else {
            int window = static_cast<int>(param_number(params, "window", 2));
            out = compute_dxd2(input, periods, window, out_base);
        }
        fill_missing(out, r.invalid, basis.fill);
        r.cols = {std::move(out)};
        return r;
    }
    if (fn_id == "noise_numeric") {
        const auto& basis = std::get<NoiseNumericBasis>(stats);
        NoiseParams np = noise_params_from(params);
        ColumnData out = inject_numeric(input, basis, np, require_rng(ctx), ctx.traindata);
        out.header = out_base;
        fill_missing(out, r.invalid, 0.0);
        r.cols = {std::move(out)};
        return r;
    }
    if (fn_id == "noise_flip") {
        const auto& basis = std::get<NoiseFlipBasis>(stats);
        NoiseParams np = noise_params_from(params);
        ColumnData out =
            inject_categoric_flip(input, basis.level_count, np, require_rng(ctx), ctx.traindata);
        out.header = out_base;
        fill_missing(out, r.invalid, 0.0);
        r.cols = {std::move(out)};
        return r;
    }
    if (fn_id == "NArw") {
        const auto& basis = std::get<MarkerBasis>(stats);
        NArowMask mask = compute_narw_mask(input, basis.narowtype);
        ColumnData out;
        out.header = out_base;
        out.role = input.role;
        for (bool f : mask.flags) out.cells.push_back(CellValue::number(f ? 1.0 : 0.0));
        r.invalid.assign(out.size(), false);
        r.cols = {std::move(out)};
        return r;
    }
    if (fn_id == "excl") {
        ColumnData out = input;
        out.header = out_base;
        r.invalid.assign(out.size(), false);
        r.cols = {std::move(out)};
        return r;
    }
    throw std::runtime_error("stages: unknown transform function '" + fn_id + "'");
}

std::vector<CellValue> stage_invert(const std::string& invert_fn, const BasisStats& stats,
                                    const std::vector<const ColumnData*>& group) {
    if (group.empty() || group.front() == nullptr) {
        throw std::runtime_error("stages: inversion needs at least one column");
    }
    std::size_t n = group.front()->size();
    std::vector<CellValue> out;
    out.reserve(n);

    if (invert_fn == "identity") {
        return group.front()->cells;
    }
    if (invert_fn == "norm") {
        const auto& basis = std::get<NormBasis>(stats);
        for (const auto& cell : group.front()->cells) out.push_back(invert_norm(basis, cell));
        return out;
    }
    if (invert_fn == "encoding") {
        const auto& basis = std::get<CatBasis>(stats);
        std::vector<CellValue> row(group.size());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < group.size(); ++c) row[c] = group[c]->cells[i];
            out.push_back(invert_encoding(basis, row));
        }
        return out;
    }
    throw std::runtime_error("stages: unknown inverter '" + invert_fn + "'");
}

}  // namespace tabtree
