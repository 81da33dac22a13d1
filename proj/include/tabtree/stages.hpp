#pragma once

#include <string>
#include <vector>

#include "tabtree/basis.hpp"
#include "tabtree/cell.hpp"
#include "tabtree/params.hpp"
#include "tabtree/registry.hpp"
#include "tabtree/rng.hpp"

namespace tabtree {

// Shared state a transform function may need beyond its input column.
struct StageContext {
    NArowType root_narowtype = NArowType::any;
    bool traindata = true;
    Rng* rng = nullptr;
};

struct StageFitResult {
    std::vector<ColumnData> cols;
    BasisStats stats;
    // Rows whose input was invalid for this stage (fill targets). The cells
    // themselves are already complete: every stage emits its fitted default
    // into flagged rows so downstream transforms never see missing data.
    std::vector<bool> invalid;
    int column_count = 1;
};

struct StageApplyResult {
    std::vector<ColumnData> cols;
    std::vector<bool> invalid;
};

bool stage_fit_fn_exists(const std::string& id);
bool stage_apply_fn_exists(const std::string& id);
bool stage_invert_fn_exists(const std::string& id);

// Static output column count of a transform function, -1 when it depends on
// the fitted data (one-hot widths, binary encodings, bins).
int stage_static_column_count(const std::string& id);

// Train side: derive the basis from the input and produce output columns.
StageFitResult stage_fit(const std::string& fn_id, const ColumnData& input,
                         const std::string& out_base, const ParamMap& params,
                         const StageContext& ctx);

// Test side: replay using the stored basis.
StageApplyResult stage_apply(const std::string& fn_id, const BasisStats& stats,
                             const ColumnData& input, const std::string& out_base,
                             const ParamMap& params, const StageContext& ctx);

// Recover the stage's input cells from one row-aligned output group.
std::vector<CellValue> stage_invert(const std::string& invert_fn, const BasisStats& stats,
                                    const std::vector<const ColumnData*>& group);

}  // namespace tabtree
