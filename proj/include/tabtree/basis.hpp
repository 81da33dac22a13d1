#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tabtree/params.hpp"
#include "tabtree/registry.hpp"

namespace tabtree {

enum class NormVariant { nmbr, mnmx, mean, mad3, lgnm, retn };

struct NormBasis {
    NormVariant variant = NormVariant::nmbr;
    double mu = 0.0;
    double sigma = 0.0;
    double min = 0.0;
    double max = 0.0;
    double mad = 0.0;
    double median = 0.0;
    bool cap_enabled = false;
    bool floor_enabled = false;
    // Stage default infill: mean of the valid train outputs.
    double fill = 0.0;

    bool operator==(const NormBasis&) const = default;
};

enum class CatVariant { bnry, ordl, ord3, onht, code1010 };

struct CatBasis {
    CatVariant variant = CatVariant::ordl;
    // Level strings in code order; code of levels[i] is i.
    std::vector<std::string> levels;
    int column_count = 1;
    // Code emitted for unseen/missing entries. For onht, -1 means the
    // all-zero row.
    int unseen_code = 0;

    bool operator==(const CatBasis&) const = default;
};

enum class BinVariant { stdev, pwrs, pwr2, fixed_width, equal_population, user_open, user_bounded };
enum class BinOutputMode { onehot, ordinal, binary };

struct BinBasis {
    BinVariant variant = BinVariant::stdev;
    BinOutputMode mode = BinOutputMode::onehot;
    // Finite edges, nondecreasing. Open variants treat values beyond the
    // ends as belonging to the first/last bin; bounded variants flag them
    // as infill targets.
    std::vector<double> edges;
    std::vector<std::string> labels;
    int bin_count = 0;
    bool open_ended = true;
    int column_count = 1;

    bool operator==(const BinBasis&) const = default;
};

enum class NoiseRange { none, unit_interval, fitted_range };

struct NoiseNumericBasis {
    NoiseRange range = NoiseRange::none;
    double lower = 0.0;
    double upper = 1.0;

    bool operator==(const NoiseNumericBasis&) const = default;
};

struct NoiseFlipBasis {
    // Number of codes the uniform replacement draws from.
    int level_count = 1;

    bool operator==(const NoiseFlipBasis&) const = default;
};

struct MarkerBasis {
    NArowType narowtype = NArowType::any;

    bool operator==(const MarkerBasis&) const = default;
};

struct PassthroughBasis {
    bool operator==(const PassthroughBasis&) const = default;
};

struct DeltaBasis {
    // Stage default infill for warmup rows and invalid inputs.
    double fill = 0.0;
    bool smoothed = false;

    bool operator==(const DeltaBasis&) const = default;
};

using BasisStats = std::variant<NormBasis, CatBasis, BinBasis, NoiseNumericBasis, NoiseFlipBasis,
                                MarkerBasis, PassthroughBasis, DeltaBasis>;

// Per returned column group: everything apply and inversion need to replay
// one transform. returned_header is the group base name; groups with
// column_count > 1 emit headers base_0 .. base_{k-1}.
struct FittedColumnBasis {
    std::string returned_header;
    std::string source_header;
    std::string category_id;
    std::vector<std::string> suffix_chain;
    BasisStats stats;
    ParamMap params;
    bool retained = false;
    int generation = 0;
    int column_count = 1;

    std::vector<std::string> output_headers() const;

    bool operator==(const FittedColumnBasis&) const = default;
};

std::string join_header(const std::string& source, const std::vector<std::string>& suffix_chain);

struct NArowMask {
    std::string header;
    std::vector<bool> flags;

    bool operator==(const NArowMask&) const = default;
};

}  // namespace tabtree
