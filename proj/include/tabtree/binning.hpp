#pragma once

#include <string>
#include <vector>

#include "tabtree/basis.hpp"
#include "tabtree/cell.hpp"

namespace tabtree {

const char* bin_variant_name(BinVariant v);
const char* bin_mode_name(BinOutputMode m);

// Valid input for a binning variant: a parseable number, positive for pwrs,
// nonzero for pwr2.
bool bin_input_valid(BinVariant v, const CellValue& cell);

// Edge layout per variant (open variants get one bin per gap between finite
// edges plus two unbounded end bins folded into the count):
//   stdev:            mu + k*sigma for k in [-(b/2-1), b/2-1], bincount even
//   pwrs:             powers of ten covering the positive train range
//   pwr2:             signed decades per sign, mirrored for negatives
//   fixed_width:      train min + i*width
//   equal_population: rank-split midpoints for bincount bins
//   user_open:        `buckets` as interior edges, ends unconstrained
//   user_bounded:     `buckets` as the full edge list, ends enforced
BinBasis fit_bins(BinVariant variant, BinOutputMode mode, const ColumnData& column,
                  const ParamMap& params);

// Left-closed right-open intervals; a boundary value belongs to the upper
// bin. Invalid and (for bounded variants) out-of-range entries emit the
// unseen pattern and are flagged as infill targets.
int bin_index(const BinBasis& basis, double value);

std::vector<ColumnData> apply_bins(const BinBasis& basis, const ColumnData& column,
                                   const std::string& out_base);

std::vector<bool> bin_invalid_rows(const BinBasis& basis, const ColumnData& column);

}  // namespace tabtree
