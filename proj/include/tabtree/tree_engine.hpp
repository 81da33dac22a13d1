#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tabtree/basis.hpp"
#include "tabtree/cell.hpp"
#include "tabtree/registry.hpp"

namespace tabtree {

// One applied transform during traversal. Generation 0 nodes come from
// upstream primitives of the root tree, deeper generations from downstream
// primitives of the category applied above them.
struct TraversalNode {
    std::string category_id;
    Primitive slot = Primitive::parents;
    int generation = 0;
    std::string input_header;
    std::vector<std::string> output_headers;
    std::vector<TraversalNode> children;
};

// A materialized output column together with its cumulative fill mask: rows
// that were invalid at any stage along its derivation chain, i.e. the rows
// a configured infill strategy re-fills.
struct ColumnOut {
    ColumnData col;
    std::vector<bool> fill_mask;
    std::string group_base;  // returned_header of the basis this belongs to
};

// Per-category parameter overrides resolved by the caller (assignparam).
using ParamLookup = std::function<ParamMap(const std::string& category_id)>;

ParamLookup no_param_overrides();

struct TreeFitResult {
    std::vector<ColumnOut> retained;
    std::vector<FittedColumnBasis> bases;
    NArowMask mask;
    std::vector<TraversalNode> nodes;
    bool source_retained = false;
};

// Traverse the root category's family tree on a train column: upstream
// primitives apply to the source, with-offspring entries recurse into their
// own tree's downstream primitives, replace-slot applications drop their
// input from the returned set. Bases for non-retained intermediates are kept
// for apply and inversion.
TreeFitResult fit_tree(const ColumnData& source, const std::string& root_id,
                       const Registry& registry, const ParamLookup& params,
                       std::uint64_t master_seed, int max_depth = 16);

struct TreeApplyResult {
    std::vector<ColumnOut> retained;
};

// Replay the recorded traversal on a test column with the stored bases.
// Noise categories inject only when traindata is true; copy_index
// distinguishes augmentation copies so each draws an independent stream.
TreeApplyResult apply_tree(const std::vector<FittedColumnBasis>& bases, const ColumnData& column,
                           const std::string& root_id, const Registry& registry, bool traindata,
                           std::uint64_t master_seed, std::uint64_t copy_index = 0,
                           int max_depth = 16);

// The shipped category registry: normalizations, categoric encodings, the
// seven binning families in three output modes, noise injections, sequential
// deltas, integer-set composites, NArw and excl.
const Registry& builtin_registry();

}  // namespace tabtree
