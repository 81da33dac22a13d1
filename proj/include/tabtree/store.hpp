#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabtree/basis.hpp"
#include "tabtree/infill.hpp"
#include "tabtree/registry.hpp"

namespace tabtree {

// Everything the top-level fit accepts. assignparam follows the
// global / per-category default / per-category-per-column convention.
struct PipelineConfig {
    std::string labels_column;
    std::map<std::string, std::vector<std::string>> assigncat;
    ParamMap global_params;
    std::map<std::string, ParamMap> default_params;
    std::map<std::string, std::map<std::string, ParamMap>> column_params;
    std::map<std::string, std::vector<std::string>> assigninfill;
    double valpercent = 0.0;
    bool shuffletrain = true;
    int noise_augment = 0;
    std::uint64_t master_seed = 42;
    std::string default_numeric_root = "retn";
    std::string default_categoric_root = "1010";
    // A column is treated as numeric when at least this fraction of its
    // non-missing entries parse as numbers.
    double numeric_sniff_threshold = 0.8;
    int max_depth = 16;

    bool operator==(const PipelineConfig&) const = default;
};

// Fitted infill for one returned column group.
struct GroupInfill {
    std::string group_base;
    InfillStrategy strategy = InfillStrategy::stdrd;
    std::vector<ColumnFillBasis> column_fills;  // one per column of the group
    std::string fill_level;                     // mode/lc level for categoric groups
    bool has_level = false;
    std::vector<Forest> models;                 // ml strategy
    std::vector<std::string> feature_headers;   // model input order
    bool uses_model = false;

    bool operator==(const GroupInfill&) const = default;
};

struct SourceColumnRecord {
    std::string header;
    std::string root_id;
    std::vector<FittedColumnBasis> bases;
    std::vector<std::string> retained_headers;  // actual returned columns, in order
    std::vector<std::string> retained_groups;   // group base per retained column
    InfillStrategy strategy = InfillStrategy::stdrd;
    std::vector<GroupInfill> infill;

    bool operator==(const SourceColumnRecord&) const = default;
};

struct ColumntypeReport {
    std::map<std::string, std::vector<std::string>> classes;
    std::map<std::string, std::vector<std::vector<std::string>>> sets;

    bool operator==(const ColumntypeReport&) const = default;
};

// Self-contained record of a fitted pipeline: apply-time needs nothing else.
struct PipelineStore {
    std::string version = "tabtree/1";
    std::uint64_t master_seed = 0;
    Registry registry;
    PipelineConfig config;
    std::vector<SourceColumnRecord> sources;
    std::optional<SourceColumnRecord> labels;
    ColumntypeReport report;

    bool operator==(const PipelineStore&) const = default;
};

// Canonical JSON with sorted keys and an explicit version field. Two round
// trips yield identical bytes.
std::string serialize_pipeline(const PipelineStore& store);

// Throws with a byte offset message on malformed input.
PipelineStore deserialize_pipeline(const std::string& bytes);

}  // namespace tabtree
