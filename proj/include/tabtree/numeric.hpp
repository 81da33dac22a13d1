#pragma once

#include <string>
#include <vector>

#include "tabtree/basis.hpp"
#include "tabtree/cell.hpp"

namespace tabtree {

const char* norm_variant_name(NormVariant v);
std::optional<NormVariant> norm_variant_from_name(const std::string& name);

// Which inputs the variant can normalize: all need a parseable number,
// lgnm additionally needs it positive.
bool norm_input_valid(NormVariant v, const CellValue& cell);

// Statistics over the valid train entries. Sigma is the population standard
// deviation; MAD is the median absolute deviation about the median; lgnm
// computes mu/sigma of ln(x). Throws when no valid entry exists.
NormBasis fit_norm(NormVariant variant, const ColumnData& column, const ParamMap& params);

// Elementwise application; invalid inputs come back missing. Degenerate
// denominators were replaced by 1 at fit time, never here.
ColumnData apply_norm(const NormBasis& basis, const ColumnData& column, const std::string& out_header);

// Exact algebraic inverse of apply_norm for each variant.
CellValue invert_norm(const NormBasis& basis, const CellValue& cell);

// out[i] = x[i] - x[i - periods], chained `order` times. The first
// periods*order entries (and any entry whose window touches an invalid
// input) are missing.
ColumnData compute_dxdt(const ColumnData& column, int periods, int order, const std::string& out_header);

// Smoothed variant: delta between means of trailing windows,
// out[i] = mean(x[i-window+1..i]) - mean(x[i-periods-window+1..i-periods]).
// window = 1 reduces exactly to compute_dxdt with order 1.
ColumnData compute_dxd2(const ColumnData& column, int periods, int window, const std::string& out_header);

}  // namespace tabtree
