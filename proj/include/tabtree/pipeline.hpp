#pragma once

#include <string>
#include <vector>

#include "tabtree/cell.hpp"
#include "tabtree/store.hpp"
#include "tabtree/tree_engine.hpp"

namespace tabtree {

struct FitResult {
    Table train;
    Table labels;
    Table validation;
    Table validation_labels;
    PipelineStore store;
    std::vector<std::string> warnings;
};

// Orchestrates the whole train-side pass: optional seeded shuffle, validation
// split (taken before any noise so augmented copies never leak into it), per
// column root selection (assigncat, else dtype sniff), family tree fits,
// infill, ML infill, augmentation, and the columntype report.
FitResult fit(const Table& train, const PipelineConfig& config,
              const Registry& base_registry = builtin_registry());

struct ApplyResult {
    Table test;
    Table labels;
    std::vector<std::string> warnings;
};

// Replays the fitted trees on new data. Noise categories inject only when
// traindata is true. noise_augment = n emits one clean copy plus n injected
// copies concatenated row-wise, labels kept aligned.
ApplyResult apply(const PipelineStore& store, const Table& test, bool traindata,
                  int noise_augment = 0);

// Classifies every returned feature column; multi-column families also land
// in the matching *_sets group.
ColumntypeReport columntype_report(const PipelineStore& store);

// True when the column's non-missing entries parse as numbers at or above
// the threshold ratio.
bool sniff_numeric(const ColumnData& column, double threshold);

}  // namespace tabtree
