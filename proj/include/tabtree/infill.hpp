#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabtree/basis.hpp"
#include "tabtree/cell.hpp"
#include "tabtree/registry.hpp"
#include "tabtree/rng.hpp"

namespace tabtree {

// Flags entries that are invalid input under a narowtype and therefore
// targets for missing data infill.
NArowMask compute_narw_mask(const ColumnData& column, NArowType narowtype);

bool narow_cell_valid(const CellValue& cell, NArowType narowtype);

enum class InfillStrategy { stdrd, zero, one, adj, mean, median, mode, negzero, lc, nan, ml };

const char* infill_strategy_name(InfillStrategy s);
std::optional<InfillStrategy> infill_strategy_from_name(const std::string& name);

// A bagged, depth-limited decision tree ensemble used as the baseline ML
// infill predictor. Deterministic given its seed; a stand-in for a full
// random forest at desk scale.
struct TreeNode {
    int feature = -1;       // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;     // leaf prediction (mean or majority code)

    bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    double predict(const std::vector<double>& row) const;
    bool operator==(const DecisionTree&) const = default;
};

struct Forest {
    std::vector<DecisionTree> trees;
    bool classification = false;
    std::vector<double> classes;  // distinct targets for classification votes

    double predict(const std::vector<double>& row) const;
    bool operator==(const Forest&) const = default;
};

struct ForestConfig {
    int tree_count = 16;
    int max_depth = 6;
    int min_leaf = 1;
};

// rows: feature matrix (row major), y: targets. Classification uses majority
// vote over per-tree predictions; regression averages them.
Forest train_forest(const std::vector<std::vector<double>>& rows, const std::vector<double>& y,
                    bool classification, const ForestConfig& config, Rng& rng);

// Fitted per-column fill derived from train data only.
struct ColumnFillBasis {
    InfillStrategy strategy = InfillStrategy::stdrd;
    // Numeric fill per column of the group.
    std::vector<double> fill_numbers;
    // Level fill for categoric groups (mode / lc).
    std::string fill_level;
    bool has_level = false;

    bool operator==(const ColumnFillBasis&) const = default;
};

// Fit the fill values for one returned column over valid (unflagged) train
// entries. Falls back to zero with a warning string when every entry is
// flagged and the strategy needs values.
ColumnFillBasis fit_fill(InfillStrategy strategy, const ColumnData& column,
                         const std::vector<bool>& mask, std::vector<std::string>* warnings);

// Replace flagged entries in place per the plan. adj copies the nearest
// prior valid entry (leading entries use the nearest following); nan leaves
// missing.
void apply_fill(ColumnData& column, const std::vector<bool>& mask, const ColumnFillBasis& plan);

}  // namespace tabtree
