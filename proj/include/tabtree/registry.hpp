#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabtree/params.hpp"

namespace tabtree {

// Header separator between a source header and each applied suffix. Source
// headers may contain it; suffix chains are stored structurally and never
// re-parsed from headers.
inline constexpr char kSeparator = '_';

// The eight family tree primitives. Order here is the processing order and
// fixes the order of returned columns.
enum class Primitive {
    parents,
    siblings,
    auntsuncles,
    cousins,
    children,
    niecesnephews,
    coworkers,
    friends,
};

constexpr std::array<Primitive, 4> kUpstreamPrimitives = {
    Primitive::parents, Primitive::siblings, Primitive::auntsuncles, Primitive::cousins};
constexpr std::array<Primitive, 4> kDownstreamPrimitives = {
    Primitive::children, Primitive::niecesnephews, Primitive::coworkers, Primitive::friends};

// Column action: replace-slot entries drop their input column from the
// returned set; supplement-slot entries keep it.
bool primitive_replaces(Primitive p);
// With-offspring slots continue recursion into the applied category's
// downstream primitives.
bool primitive_has_offspring(Primitive p);
const char* primitive_name(Primitive p);
std::optional<Primitive> primitive_from_name(const std::string& name);

// The eight primitive slots, each holding a list of category ids.
struct FamilyTree {
    std::vector<std::string> parents;
    std::vector<std::string> siblings;
    std::vector<std::string> auntsuncles;
    std::vector<std::string> cousins;
    std::vector<std::string> children;
    std::vector<std::string> niecesnephews;
    std::vector<std::string> coworkers;
    std::vector<std::string> friends;

    const std::vector<std::string>& slot(Primitive p) const;
    std::vector<std::string>& slot(Primitive p);

    bool operator==(const FamilyTree&) const = default;
};

// Which entries of a source column count as valid input; everything else
// becomes an infill target.
enum class NArowType { numeric, nonnegative_numeric, nonzero_numeric, integer, positive_numeric, any };

// Kind of predictive model ML infill trains for a category's outputs.
enum class MLInfillType { numeric, binary, ordinal, multicolumn_categoric, exclude };

const char* narowtype_name(NArowType t);
std::optional<NArowType> narowtype_from_name(const std::string& name);
const char* mlinfilltype_name(MLInfillType t);
std::optional<MLInfillType> mlinfilltype_from_name(const std::string& name);

// Fit/apply/invert behaviour of one transformation category. fit_fn and
// apply_fn are symbolic transform-function ids resolved against the engine's
// function table; invert_fn is empty when the transform is not invertible.
struct ProcessEntry {
    std::string fit_fn;
    std::string apply_fn;
    std::string invert_fn;
    NArowType narowtype = NArowType::numeric;
    MLInfillType mlinfilltype = MLInfillType::numeric;
    ParamMap default_params;
    std::string suffix;
    bool full_information = false;
    // Accepted and stored for config compatibility; feature-importance
    // machinery that would consume it is out of scope.
    std::string labelctgy;

    bool operator==(const ProcessEntry&) const = default;
};

struct TransformCategory {
    std::string id;
    FamilyTree tree;
    ProcessEntry process;

    bool operator==(const TransformCategory&) const = default;
};

class Registry {
public:
    void add(TransformCategory category);
    bool contains(const std::string& id) const;
    const TransformCategory& at(const std::string& id) const;
    const std::map<std::string, TransformCategory>& categories() const { return categories_; }
    std::size_t size() const { return categories_.size(); }

    bool operator==(const Registry&) const = default;

private:
    std::map<std::string, TransformCategory> categories_;
};

// Report-based validation: dangling ids, bad suffixes, unknown transform
// functions, fit/apply output count disagreements. Empty report means valid.
std::vector<std::string> validate_registry(const Registry& registry);

}  // namespace tabtree
