#pragma once

#include <string>
#include <vector>

#include "tabtree/cell.hpp"
#include "tabtree/store.hpp"

namespace tabtree {

// One candidate recovery chain for a source column, leaf group first.
struct InversionPath {
    std::string source_header;
    std::vector<std::string> basis_chain;  // returned_header per step, leaf -> root
    bool full_information = true;
    // Number of non-identity inversions; a passthrough-only chain is length 0.
    int length = 0;
};

// Enumerates root-to-leaf chains whose every step is invertible, ranked
// full-information first, then ascending length, ties by traversal
// discovery order. Throws when no chain is invertible, naming the blocking
// category.
std::vector<InversionPath> build_inversion_paths(const PipelineStore& store,
                                                 const std::string& source_header);

enum class InvertTarget { labels, test };

struct InversionReportEntry {
    std::string source_header;
    std::vector<std::string> path;  // category ids, leaf -> root
    bool full_information = false;
    bool recovered = false;
    std::string note;
};

struct InvertResult {
    Table recovered;
    std::vector<std::string> recovered_list;
    std::vector<InversionReportEntry> report;
};

// Applies inverters along the best fully-present path per source column.
// Noise steps invert as identity and mark the path approximate. A partially
// present multi-column group is an error listing the absent headers.
InvertResult invert(const PipelineStore& store, const Table& data, InvertTarget target);

}  // namespace tabtree
