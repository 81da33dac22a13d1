#pragma once

#include <string>
#include <vector>

#include "tabtree/basis.hpp"
#include "tabtree/cell.hpp"

namespace tabtree {

const char* cat_variant_name(CatVariant v);
std::optional<CatVariant> cat_variant_from_name(const std::string& name);

// Level assignment: ordl and bnry order levels lexicographically, ord3 by
// descending train frequency with lexicographic tie break, onht and 1010
// lexicographically. Missing entries are not levels; they map to the unseen
// code. bnry requires at most two distinct train levels.
CatBasis fit_encoding(CatVariant variant, const ColumnData& column);

// Encode a column; unseen test levels take the reserved unseen code
// (all-zero row for onht, the more frequent level for bnry).
std::vector<ColumnData> apply_encoding(const CatBasis& basis, const ColumnData& column,
                                       const std::string& out_base);

// Rows invalid for the encoding (missing, or unseen at apply time); these
// are the stage's infill targets.
std::vector<bool> encoding_invalid_rows(const CatBasis& basis, const ColumnData& column);

// Decode one row of group cells back to the original level (text cell), or
// missing for the unseen pattern.
CellValue invert_encoding(const CatBasis& basis, const std::vector<CellValue>& row);

// Bit width that fits `codes` distinct values: ceil(log2(max(codes, 2))).
int bits_for_codes(int codes);

}  // namespace tabtree
