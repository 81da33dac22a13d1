#include "tabtree/pipeline.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tabtree/categoric.hpp"
#include "tabtree/infill.hpp"
#include "tabtree/rng.hpp"

namespace tabtree {

namespace {

// ---------------------------------------------------------------------------
// Config validation and root selection

void validate_config(const Table& table, const PipelineConfig& config, const Registry& registry) {
    if (table.columns.empty() || table.row_count() == 0) {
        throw std::runtime_error("fit: train table is empty");
    }
    if (config.valpercent < 0.0 || config.valpercent >= 1.0) {
        throw std::runtime_error("fit: valpercent must lie in [0, 1)");
    }
    if (config.noise_augment < 0) {
        throw std::runtime_error("fit: noise_augment must be nonnegative");
    }
    if (!config.labels_column.empty() && !table.find(config.labels_column)) {
        throw std::runtime_error("fit: labels column '" + config.labels_column +
                                 "' is not in the table");
    }
    auto report = validate_registry(registry);
    if (!report.empty()) {
        std::string msg = "fit: registry is invalid:";
        for (const auto& v : report) msg += "\n  " + v;
        throw std::runtime_error(msg);
    }
    std::set<std::string> assigned;
    for (const auto& [root, headers] : config.assigncat) {
        if (!registry.contains(root)) {
            throw std::runtime_error("fit: assigncat root '" + root + "' is not in the registry");
        }
        for (const auto& h : headers) {
            if (!table.find(h)) {
                throw std::runtime_error("fit: assigncat header '" + h + "' is not in the table");
            }
            if (!assigned.insert(h).second) {
                throw std::runtime_error("fit: header '" + h +
                                         "' assigned to more than one root category");
            }
        }
    }
    for (const auto& [strategy, headers] : config.assigninfill) {
        if (!infill_strategy_from_name(strategy)) {
            throw std::runtime_error("fit: unknown infill strategy '" + strategy + "'");
        }
        for (const auto& h : headers) {
            if (!table.find(h)) {
                throw std::runtime_error("fit: assigninfill header '" + h +
                                         "' is not in the table");
            }
        }
    }
    if (!registry.contains(config.default_numeric_root) ||
        !registry.contains(config.default_categoric_root)) {
        throw std::runtime_error("fit: default root categories must exist in the registry");
    }
}

std::string root_for_column(const ColumnData& column, const PipelineConfig& config) {
    for (const auto& [root, headers] : config.assigncat) {
        if (std::find(headers.begin(), headers.end(), column.header) != headers.end()) {
            return root;
        }
    }
    return sniff_numeric(column, config.numeric_sniff_threshold) ? config.default_numeric_root
                                                                 : config.default_categoric_root;
}

InfillStrategy strategy_for_column(const std::string& header, const PipelineConfig& config) {
    for (const auto& [name, headers] : config.assigninfill) {
        if (std::find(headers.begin(), headers.end(), header) != headers.end()) {
            return *infill_strategy_from_name(name);
        }
    }
    return InfillStrategy::stdrd;
}

// assignparam resolution: category defaults < global < root-propagated <
// per-category defaults < per-category-per-column.
ParamLookup make_param_lookup(const PipelineConfig& config, const std::string& column_header,
                              const std::string& root_id) {
    return [&config, column_header, root_id](const std::string& cat_id) {
        ParamMap out = config.global_params;
        if (cat_id != root_id) {
            auto root_it = config.default_params.find(root_id);
            if (root_it != config.default_params.end()) out = merge_params(out, root_it->second);
            auto root_cols = config.column_params.find(root_id);
            if (root_cols != config.column_params.end()) {
                auto col_it = root_cols->second.find(column_header);
                if (col_it != root_cols->second.end()) out = merge_params(out, col_it->second);
            }
        }
        auto cat_it = config.default_params.find(cat_id);
        if (cat_it != config.default_params.end()) out = merge_params(out, cat_it->second);
        auto cols_it = config.column_params.find(cat_id);
        if (cols_it != config.column_params.end()) {
            auto col_it = cols_it->second.find(column_header);
            if (col_it != cols_it->second.end()) out = merge_params(out, col_it->second);
        }
        return out;
    };
}

// ---------------------------------------------------------------------------
// Rows: shuffle and split

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t master_seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(master_seed, {"shuffle"}));
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = rng.uniform_int(i);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

Table select_rows(const Table& table, const std::vector<std::size_t>& rows) {
    Table out;
    out.columns.reserve(table.columns.size());
    for (const auto& col : table.columns) {
        ColumnData c;
        c.header = col.header;
        c.role = col.role;
        c.cells.reserve(rows.size());
        for (std::size_t r : rows) c.cells.push_back(col.cells[r]);
        out.columns.push_back(std::move(c));
    }
    return out;
}

void append_rows(Table& dst, const Table& src) {
    if (dst.columns.empty()) {
        dst = src;
        return;
    }
    if (dst.columns.size() != src.columns.size()) {
        throw std::runtime_error("append_rows: column count mismatch");
    }
    for (std::size_t c = 0; c < dst.columns.size(); ++c) {
        dst.columns[c].cells.insert(dst.columns[c].cells.end(), src.columns[c].cells.begin(),
                                    src.columns[c].cells.end());
    }
}

// ---------------------------------------------------------------------------
// Group infill

const FittedColumnBasis* find_basis(const std::vector<FittedColumnBasis>& bases,
                                    const std::string& group_base) {
    for (const auto& b : bases) {
        if (b.returned_header == group_base) return &b;
    }
    return nullptr;
}

bool group_is_categoric(const BasisStats& stats) {
    return std::holds_alternative<CatBasis>(stats) || std::holds_alternative<BinBasis>(stats);
}

bool group_skips_infill(const Registry& registry, const FittedColumnBasis& basis) {
    if (!registry.contains(basis.category_id)) return true;
    return registry.at(basis.category_id).process.mlinfilltype == MLInfillType::exclude;
}

// Encode one categoric level / bin code into its output pattern.
std::vector<double> pattern_for_code(const BasisStats& stats, int code) {
    if (const auto* cat = std::get_if<CatBasis>(&stats)) {
        std::vector<double> row(static_cast<std::size_t>(cat->column_count), 0.0);
        switch (cat->variant) {
            case CatVariant::bnry:
            case CatVariant::ordl:
            case CatVariant::ord3:
                row[0] = static_cast<double>(code);
                break;
            case CatVariant::onht:
                if (code >= 0 && code < cat->column_count) row[code] = 1.0;
                break;
            case CatVariant::code1010:
                for (int bit = 0; bit < cat->column_count; ++bit) {
                    int shift = cat->column_count - 1 - bit;
                    row[bit] = ((code >> shift) & 1) ? 1.0 : 0.0;
                }
                break;
        }
        return row;
    }
    const auto& bin = std::get<BinBasis>(stats);
    std::vector<double> row(static_cast<std::size_t>(bin.column_count), 0.0);
    switch (bin.mode) {
        case BinOutputMode::ordinal:
            row[0] = static_cast<double>(code);
            break;
        case BinOutputMode::onehot:
            if (code >= 0 && code < bin.column_count) row[code] = 1.0;
            break;
        case BinOutputMode::binary:
            for (int bit = 0; bit < bin.column_count; ++bit) {
                int shift = bin.column_count - 1 - bit;
                row[bit] = ((code >> shift) & 1) ? 1.0 : 0.0;
            }
            break;
    }
    return row;
}

// Decode one output row of a categoric/bin group back to its code, -1 when
// the pattern is the unseen/all-zero one.
int code_from_row(const BasisStats& stats, const std::vector<ColumnData*>& cols, std::size_t row) {
    auto num = [&](std::size_t c) {
        auto v = cols[c]->cells[row].as_number();
        return v ? *v : 0.0;
    };
    if (const auto* cat = std::get_if<CatBasis>(&stats)) {
        switch (cat->variant) {
            case CatVariant::bnry:
            case CatVariant::ordl:
            case CatVariant::ord3:
                return static_cast<int>(std::llround(num(0)));
            case CatVariant::onht:
                for (std::size_t c = 0; c < cols.size(); ++c) {
                    if (std::llround(num(c)) == 1) return static_cast<int>(c);
                }
                return -1;
            case CatVariant::code1010: {
                int code = 0;
                for (std::size_t c = 0; c < cols.size(); ++c) code = code * 2 + (std::llround(num(c)) == 1 ? 1 : 0);
                return code;
            }
        }
    }
    const auto& bin = std::get<BinBasis>(stats);
    switch (bin.mode) {
        case BinOutputMode::ordinal:
            return static_cast<int>(std::llround(num(0)));
        case BinOutputMode::onehot:
            for (std::size_t c = 0; c < cols.size(); ++c) {
                if (std::llround(num(c)) == 1) return static_cast<int>(c);
            }
            return -1;
        case BinOutputMode::binary: {
            int code = 0;
            for (std::size_t c = 0; c < cols.size(); ++c) code = code * 2 + (std::llround(num(c)) == 1 ? 1 : 0);
            return code;
        }
    }
    return -1;
}

void write_pattern(const std::vector<double>& pattern, const std::vector<ColumnData*>& cols,
                   std::size_t row) {
    for (std::size_t c = 0; c < cols.size() && c < pattern.size(); ++c) {
        cols[c]->cells[row] = CellValue::number(pattern[c]);
    }
}

struct GroupView {
    const FittedColumnBasis* basis = nullptr;
    std::vector<ColumnData*> cols;
    const std::vector<bool>* mask = nullptr;
};

// Collect retained columns of one source by group, preserving order.
std::vector<GroupView> group_views(const SourceColumnRecord& record,
                                   std::vector<ColumnOut>& outputs) {
    std::vector<GroupView> views;
    std::map<std::string, std::size_t> by_base;
    for (auto& out : outputs) {
        auto it = by_base.find(out.group_base);
        if (it == by_base.end()) {
            GroupView v;
            v.basis = find_basis(record.bases, out.group_base);
            v.mask = &out.fill_mask;
            v.cols.push_back(&out.col);
            by_base[out.group_base] = views.size();
            views.push_back(std::move(v));
        } else {
            views[it->second].cols.push_back(&out.col);
        }
    }
    return views;
}

// Non-ML infill for one group: fit (train side) or replay (apply side).
void run_group_infill(GroupInfill& plan, const GroupView& view, bool fitting,
                      std::vector<std::string>* warnings) {
    if (!view.basis) return;  // raw retained source: no infill
    const auto& mask = *view.mask;

    if (group_is_categoric(view.basis->stats)) {
        switch (plan.strategy) {
            case InfillStrategy::stdrd:
                return;  // stage already emitted the unseen pattern
            case InfillStrategy::mode:
            case InfillStrategy::lc: {
                if (fitting) {
                    std::map<int, std::size_t> counts;
                    for (std::size_t r = 0; r < view.cols.front()->size(); ++r) {
                        if (r < mask.size() && mask[r]) continue;
                        int code = code_from_row(view.basis->stats, view.cols, r);
                        if (code >= 0) ++counts[code];
                    }
                    if (counts.empty()) {
                        if (warnings) {
                            warnings->push_back("infill: group '" + plan.group_base +
                                                "' has no unflagged rows; keeping stage default");
                        }
                        plan.strategy = InfillStrategy::stdrd;
                        return;
                    }
                    int best = counts.begin()->first;
                    std::size_t best_count = counts.begin()->second;
                    for (const auto& [code, count] : counts) {
                        bool better = plan.strategy == InfillStrategy::lc ? count < best_count
                                                                          : count > best_count;
                        if (better) {
                            best = code;
                            best_count = count;
                        }
                    }
                    plan.fill_level = std::to_string(best);
                    plan.has_level = true;
                }
                if (!plan.has_level) return;
                int code = std::stoi(plan.fill_level);
                auto pattern = pattern_for_code(view.basis->stats, code);
                for (std::size_t r = 0; r < view.cols.front()->size(); ++r) {
                    if (r < mask.size() && mask[r]) write_pattern(pattern, view.cols, r);
                }
                return;
            }
            case InfillStrategy::adj:
            case InfillStrategy::nan:
                break;  // handled per column below
            default:
                break;
        }
    }

    // Per-column strategies; the shared mask keeps group rows consistent.
    for (std::size_t c = 0; c < view.cols.size(); ++c) {
        if (fitting) {
            plan.column_fills.push_back(
                fit_fill(plan.strategy, *view.cols[c], mask, warnings));
        }
        if (c < plan.column_fills.size()) {
            apply_fill(*view.cols[c], mask, plan.column_fills[c]);
        }
    }
}

// ---------------------------------------------------------------------------
// ML infill

struct MlTarget {
    std::size_t source_index;
    std::size_t group_index;
};

std::vector<std::vector<double>> feature_matrix(
    const std::vector<std::vector<ColumnOut>>& outputs, std::size_t skip_source,
    std::vector<std::string>* headers_out) {
    std::size_t rows = 0;
    for (const auto& src : outputs) {
        if (!src.empty()) {
            rows = src.front().col.size();
            break;
        }
    }
    std::vector<std::vector<double>> matrix(rows);
    for (std::size_t s = 0; s < outputs.size(); ++s) {
        if (s == skip_source) continue;
        for (const auto& out : outputs[s]) {
            if (headers_out) headers_out->push_back(out.col.header);
            for (std::size_t r = 0; r < rows; ++r) {
                auto v = out.col.cells[r].as_number();
                matrix[r].push_back(v ? *v : 0.0);
            }
        }
    }
    return matrix;
}

std::vector<std::vector<double>> feature_matrix_from_headers(
    const std::vector<std::vector<ColumnOut>>& outputs, const std::vector<std::string>& headers) {
    std::map<std::string, const ColumnData*> by_header;
    std::size_t rows = 0;
    for (const auto& src : outputs) {
        for (const auto& out : src) {
            by_header[out.col.header] = &out.col;
            rows = out.col.size();
        }
    }
    std::vector<std::vector<double>> matrix(rows);
    for (const auto& h : headers) {
        auto it = by_header.find(h);
        for (std::size_t r = 0; r < rows; ++r) {
            double v = 0.0;
            if (it != by_header.end()) {
                auto num = it->second->cells[r].as_number();
                if (num) v = *num;
            }
            matrix[r].push_back(v);
        }
    }
    return matrix;
}

// Train (or replay) ML infill for one group. The model predicts from every
// retained column outside the target's source; flagged rows get predictions.
void run_ml_infill(GroupInfill& plan, const GroupView& view, MLInfillType mltype,
                   const std::vector<std::vector<double>>& features, bool fitting,
                   std::uint64_t master_seed, std::vector<std::string>* warnings) {
    const auto& mask = *view.mask;
    std::size_t rows = view.cols.front()->size();

    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> fill_rows;
    for (std::size_t r = 0; r < rows; ++r) {
        if (r < mask.size() && mask[r]) {
            fill_rows.push_back(r);
        } else {
            train_rows.push_back(r);
        }
    }

    if (fitting) {
        if (train_rows.size() < 8) {
            if (warnings) {
                warnings->push_back("ml infill: group '" + plan.group_base + "' has only " +
                                    std::to_string(train_rows.size()) +
                                    " usable rows; falling back to stdrd");
            }
            plan.strategy = InfillStrategy::stdrd;
            return;
        }
        ForestConfig fc;
        Rng rng(derive_seed(master_seed, {"mlinfill", plan.group_base}));
        std::vector<std::vector<double>> x;
        x.reserve(train_rows.size());
        for (std::size_t r : train_rows) x.push_back(features[r]);

        if (mltype == MLInfillType::numeric) {
            for (auto* col : view.cols) {
                std::vector<double> y;
                y.reserve(train_rows.size());
                for (std::size_t r : train_rows) {
                    auto v = col->cells[r].as_number();
                    y.push_back(v ? *v : 0.0);
                }
                plan.models.push_back(train_forest(x, y, false, fc, rng));
            }
        } else {
            std::vector<double> y;
            y.reserve(train_rows.size());
            for (std::size_t r : train_rows) {
                int code = group_is_categoric(view.basis->stats)
                               ? code_from_row(view.basis->stats, view.cols, r)
                               : static_cast<int>(std::llround(
                                     view.cols.front()->cells[r].as_number().value_or(0.0)));
                y.push_back(static_cast<double>(std::max(code, 0)));
            }
            plan.models.push_back(train_forest(x, y, true, fc, rng));
        }
        plan.uses_model = true;
    }

    if (!plan.uses_model || plan.models.empty()) return;
    for (std::size_t r : fill_rows) {
        if (mltype == MLInfillType::numeric) {
            for (std::size_t c = 0; c < view.cols.size() && c < plan.models.size(); ++c) {
                view.cols[c]->cells[r] = CellValue::number(plan.models[c].predict(features[r]));
            }
        } else {
            int code = static_cast<int>(std::llround(plan.models.front().predict(features[r])));
            if (group_is_categoric(view.basis->stats)) {
                write_pattern(pattern_for_code(view.basis->stats, code), view.cols, r);
            } else {
                view.cols.front()->cells[r] = CellValue::number(static_cast<double>(code));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Fitting one source column end to end (tree + non-ML infill records)

struct FittedSource {
    SourceColumnRecord record;
    std::vector<ColumnOut> outputs;
};

FittedSource fit_source(const ColumnData& column, const std::string& root_id,
                        const PipelineConfig& config, const Registry& registry,
                        std::vector<std::string>* warnings) {
    FittedSource fs;
    fs.record.header = column.header;
    fs.record.root_id = root_id;
    fs.record.strategy = strategy_for_column(column.header, config);

    auto lookup = make_param_lookup(config, column.header, root_id);
    TreeFitResult tree = fit_tree(column, root_id, registry, lookup, config.master_seed,
                                  config.max_depth);
    fs.record.bases = std::move(tree.bases);
    fs.outputs = std::move(tree.retained);

    for (const auto& out : fs.outputs) {
        fs.record.retained_headers.push_back(out.col.header);
        fs.record.retained_groups.push_back(out.group_base);
    }

    auto views = group_views(fs.record, fs.outputs);
    for (const auto& view : views) {
        GroupInfill plan;
        plan.group_base = view.basis ? view.basis->returned_header : view.cols.front()->header;
        plan.strategy = fs.record.strategy;
        if (!view.basis || group_skips_infill(registry, *view.basis)) {
            plan.strategy = InfillStrategy::stdrd;
            fs.record.infill.push_back(std::move(plan));
            continue;
        }
        if (plan.strategy != InfillStrategy::ml) {
            run_group_infill(plan, view, true, warnings);
        }
        fs.record.infill.push_back(std::move(plan));
    }
    return fs;
}

void replay_infill(SourceColumnRecord& record, std::vector<ColumnOut>& outputs,
                   const Registry& registry, std::vector<std::string>* warnings) {
    auto views = group_views(record, outputs);
    for (std::size_t g = 0; g < views.size() && g < record.infill.size(); ++g) {
        GroupInfill& plan = record.infill[g];
        if (plan.strategy == InfillStrategy::ml || plan.uses_model) continue;
        if (!views[g].basis || group_skips_infill(registry, *views[g].basis)) continue;
        run_group_infill(plan, views[g], false, warnings);
    }
}

void run_all_ml_infill(std::vector<SourceColumnRecord>& records,
                       std::vector<std::vector<ColumnOut>>& outputs, const Registry& registry,
                       bool fitting, std::uint64_t master_seed,
                       std::vector<std::string>* warnings) {
    for (std::size_t s = 0; s < records.size(); ++s) {
        bool wants_ml = false;
        for (const auto& plan : records[s].infill) {
            if (plan.strategy == InfillStrategy::ml || plan.uses_model) wants_ml = true;
        }
        if (!wants_ml) continue;

        auto views = group_views(records[s], outputs[s]);
        for (std::size_t g = 0; g < views.size() && g < records[s].infill.size(); ++g) {
            GroupInfill& plan = records[s].infill[g];
            if (plan.strategy != InfillStrategy::ml && !plan.uses_model) continue;
            if (!views[g].basis || group_skips_infill(registry, *views[g].basis)) continue;
            MLInfillType mltype = registry.at(views[g].basis->category_id).process.mlinfilltype;

            std::vector<std::vector<double>> features;
            if (fitting) {
                plan.feature_headers.clear();
                features = feature_matrix(outputs, s, &plan.feature_headers);
            } else {
                features = feature_matrix_from_headers(outputs, plan.feature_headers);
            }
            run_ml_infill(plan, views[g], mltype, features, fitting, master_seed, warnings);
            if (fitting && plan.strategy == InfillStrategy::ml &&
                plan.models.empty()) {
                // Fallback landed on stdrd; nothing to replay at apply time.
                plan.uses_model = false;
            }
        }
    }
}

Table outputs_to_table(const std::vector<std::vector<ColumnOut>>& outputs) {
    Table t;
    for (const auto& src : outputs) {
        for (const auto& out : src) t.columns.push_back(out.col);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Columntype classification

struct Classified {
    std::string cls;
    bool is_set = false;
    std::string set_cls;
};

Classified classify_basis(const Registry& registry, const FittedColumnBasis& basis) {
    Classified c;
    if (std::holds_alternative<MarkerBasis>(basis.stats)) {
        c.cls = "boolean";
        return c;
    }
    if (std::holds_alternative<PassthroughBasis>(basis.stats)) {
        c.cls = "passthrough";
        return c;
    }
    if (std::holds_alternative<NormBasis>(basis.stats) ||
        std::holds_alternative<DeltaBasis>(basis.stats) ||
        std::holds_alternative<NoiseNumericBasis>(basis.stats)) {
        c.cls = "continuous";
        return c;
    }
    if (std::holds_alternative<NoiseFlipBasis>(basis.stats)) {
        bool binary = registry.contains(basis.category_id) &&
                      registry.at(basis.category_id).process.mlinfilltype == MLInfillType::binary;
        c.cls = binary ? "boolean" : "ordinal";
        return c;
    }
    if (const auto* cat = std::get_if<CatBasis>(&basis.stats)) {
        switch (cat->variant) {
            case CatVariant::bnry: c.cls = "boolean"; return c;
            case CatVariant::ordl:
            case CatVariant::ord3: c.cls = "ordinal"; return c;
            case CatVariant::onht:
                c.cls = "onehot";
                c.is_set = true;
                c.set_cls = "onehot_sets";
                return c;
            case CatVariant::code1010:
                c.cls = "binary";
                c.is_set = true;
                c.set_cls = "binary_sets";
                return c;
        }
    }
    const auto& bin = std::get<BinBasis>(basis.stats);
    switch (bin.mode) {
        case BinOutputMode::ordinal: c.cls = "ordinal"; return c;
        case BinOutputMode::onehot:
            c.cls = "onehot";
            c.is_set = true;
            c.set_cls = "onehot_sets";
            return c;
        case BinOutputMode::binary:
            c.cls = "binary";
            c.is_set = true;
            c.set_cls = "binary_sets";
            return c;
    }
    c.cls = "passthrough";
    return c;
}

// One full test-side pass at a fixed augmentation copy index. Copies the
// source records so stored plans stay untouched.
struct OnePass {
    Table test;
    Table labels;
};

std::vector<ColumnOut> ordered_outputs(const SourceColumnRecord& record,
                                       std::vector<ColumnOut> raw) {
    std::map<std::string, std::size_t> by_header;
    for (std::size_t i = 0; i < raw.size(); ++i) by_header[raw[i].col.header] = i;
    std::vector<ColumnOut> out;
    out.reserve(record.retained_headers.size());
    for (const auto& h : record.retained_headers) {
        auto it = by_header.find(h);
        if (it == by_header.end()) {
            throw std::runtime_error("apply: traversal did not produce stored column '" + h +
                                     "'; pipeline and registry are out of sync");
        }
        out.push_back(std::move(raw[it->second]));
    }
    return out;
}

OnePass apply_once(const PipelineStore& store, const Table& test, bool traindata,
                   std::uint64_t copy_index, std::vector<std::string>* warnings) {
    OnePass result;
    std::vector<SourceColumnRecord> records = store.sources;
    std::vector<std::vector<ColumnOut>> outputs;
    outputs.reserve(records.size());
    for (auto& record : records) {
        const ColumnData* col = test.find(record.header);
        TreeApplyResult applied = apply_tree(record.bases, *col, record.root_id, store.registry,
                                             traindata, store.master_seed, copy_index,
                                             store.config.max_depth);
        outputs.push_back(ordered_outputs(record, std::move(applied.retained)));
        replay_infill(record, outputs.back(), store.registry, warnings);
    }
    run_all_ml_infill(records, outputs, store.registry, false, store.master_seed, warnings);
    result.test = outputs_to_table(outputs);

    if (store.labels && test.find(store.labels->header)) {
        SourceColumnRecord labels_record = *store.labels;
        const ColumnData* col = test.find(labels_record.header);
        TreeApplyResult applied =
            apply_tree(labels_record.bases, *col, labels_record.root_id, store.registry, traindata,
                       store.master_seed, copy_index, store.config.max_depth);
        std::vector<std::vector<ColumnOut>> louts;
        louts.push_back(ordered_outputs(labels_record, std::move(applied.retained)));
        replay_infill(labels_record, louts.back(), store.registry, warnings);
        result.labels = outputs_to_table(louts);
    }
    return result;
}

}  // namespace

bool sniff_numeric(const ColumnData& column, double threshold) {
    std::size_t present = 0;
    std::size_t numeric = 0;
    for (const auto& cell : column.cells) {
        if (cell.is_missing()) continue;
        ++present;
        if (cell.as_number()) ++numeric;
    }
    if (present == 0) return false;
    return static_cast<double>(numeric) >= threshold * static_cast<double>(present);
}

ColumntypeReport columntype_report(const PipelineStore& store) {
    ColumntypeReport report;
    for (const char* cls :
         {"continuous", "boolean", "ordinal", "onehot", "binary", "passthrough"}) {
        report.classes[cls] = {};
    }
    report.sets["onehot_sets"] = {};
    report.sets["binary_sets"] = {};

    for (const auto& source : store.sources) {
        std::set<std::string> seen_groups;
        for (std::size_t i = 0; i < source.retained_headers.size(); ++i) {
            const std::string& header = source.retained_headers[i];
            const std::string& group = source.retained_groups[i];
            const FittedColumnBasis* basis = find_basis(source.bases, group);
            if (!basis) {
                report.classes["passthrough"].push_back(header);
                continue;
            }
            Classified c = classify_basis(store.registry, *basis);
            report.classes[c.cls].push_back(header);
            if (c.is_set && basis->column_count > 1 && seen_groups.insert(group).second) {
                report.sets[c.set_cls].push_back(basis->output_headers());
            }
        }
    }
    return report;
}

FitResult fit(const Table& input, const PipelineConfig& config, const Registry& base_registry) {
    validate_config(input, config, base_registry);
    FitResult result;
    result.store.version = "tabtree/1";
    result.store.master_seed = config.master_seed;
    result.store.registry = base_registry;
    result.store.config = config;

    // Shuffle, then carve the validation split off the tail before anything
    // else sees the rows.
    std::size_t n = input.row_count();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (config.shuffletrain) order = shuffled_order(n, config.master_seed);
    std::size_t n_val = static_cast<std::size_t>(config.valpercent * static_cast<double>(n));
    std::vector<std::size_t> train_rows(order.begin(), order.end() - n_val);
    std::vector<std::size_t> val_rows(order.end() - n_val, order.end());
    if (train_rows.empty()) throw std::runtime_error("fit: validation split left no train rows");

    Table train = select_rows(input, train_rows);

    // Fit every feature column, then the labels column.
    std::vector<SourceColumnRecord> records;
    std::vector<std::vector<ColumnOut>> outputs;
    for (const auto& column : train.columns) {
        if (column.header == config.labels_column) continue;
        std::string root = root_for_column(column, config);
        FittedSource fs = fit_source(column, root, config, base_registry, &result.warnings);
        records.push_back(std::move(fs.record));
        outputs.push_back(std::move(fs.outputs));
    }
    run_all_ml_infill(records, outputs, base_registry, true, config.master_seed,
                      &result.warnings);

    std::vector<std::vector<ColumnOut>> label_outputs;
    if (!config.labels_column.empty()) {
        const ColumnData* labels_col = train.find(config.labels_column);
        std::string root = root_for_column(*labels_col, config);
        FittedSource fs = fit_source(*labels_col, root, config, base_registry, &result.warnings);
        // Labels carry no NArw marker: rows with missing labels cannot be
        // trained on anyway, and a marker would pollute the label set.
        std::vector<ColumnOut> kept;
        SourceColumnRecord rec = std::move(fs.record);
        rec.retained_headers.clear();
        rec.retained_groups.clear();
        for (auto& out : fs.outputs) {
            const FittedColumnBasis* b = find_basis(rec.bases, out.group_base);
            if (b && b->category_id == "NArw") continue;
            rec.retained_headers.push_back(out.col.header);
            rec.retained_groups.push_back(out.group_base);
            kept.push_back(std::move(out));
        }
        result.store.labels = std::move(rec);
        label_outputs.push_back(std::move(kept));
    }

    result.store.sources = std::move(records);
    result.store.report = columntype_report(result.store);

    result.train = outputs_to_table(outputs);
    if (result.store.labels) result.labels = outputs_to_table(label_outputs);

    // Validation rows replay through the test path, never with noise.
    if (n_val > 0) {
        Table val = select_rows(input, val_rows);
        OnePass applied = apply_once(result.store, val, false, 0, &result.warnings);
        result.validation = std::move(applied.test);
        result.validation_labels = std::move(applied.labels);
    }

    // Augmentation: the fit output already carries train-side noise; the
    // first extra copy replays clean, further copies inject fresh noise.
    for (int copy = 1; copy <= config.noise_augment; ++copy) {
        OnePass extra = apply_once(result.store, train, copy > 1,
                                   static_cast<std::uint64_t>(copy), &result.warnings);
        append_rows(result.train, extra.test);
        if (result.store.labels) append_rows(result.labels, extra.labels);
    }
    return result;
}

ApplyResult apply(const PipelineStore& store, const Table& test, bool traindata,
                  int noise_augment) {
    if (noise_augment < 0) throw std::runtime_error("apply: noise_augment must be nonnegative");
    std::vector<std::string> absent;
    for (const auto& source : store.sources) {
        if (!test.find(source.header)) absent.push_back(source.header);
    }
    if (!absent.empty()) {
        std::string msg = "apply: test table is missing source columns:";
        for (const auto& h : absent) msg += " '" + h + "'";
        throw std::runtime_error(msg);
    }

    ApplyResult result;
    int copies = noise_augment > 0 ? noise_augment + 1 : 1;
    for (int copy = 0; copy < copies; ++copy) {
        bool copy_traindata = noise_augment > 0 ? copy > 0 : traindata;
        OnePass one = apply_once(store, test, copy_traindata, static_cast<std::uint64_t>(copy),
                                 &result.warnings);
        append_rows(result.test, one.test);
        if (!one.labels.columns.empty()) append_rows(result.labels, one.labels);
    }
    return result;
}

}  // namespace tabtree
