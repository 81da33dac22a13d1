#include "tabtree/registry.hpp"

#include <stdexcept>

#include "tabtree/stages.hpp"

namespace tabtree {

bool primitive_replaces(Primitive p) {
    switch (p) {
        case Primitive::parents:
        case Primitive::auntsuncles:
        case Primitive::children:
        case Primitive::coworkers:
            return true;
        default:
            return false;
    }
}

bool primitive_has_offspring(Primitive p) {
    switch (p) {
        case Primitive::parents:
        case Primitive::siblings:
        case Primitive::children:
        case Primitive::niecesnephews:
            return true;
        default:
            return false;
    }
}

const char* primitive_name(Primitive p) {
    switch (p) {
        case Primitive::parents: return "parents";
        case Primitive::siblings: return "siblings";
        case Primitive::auntsuncles: return "auntsuncles";
        case Primitive::cousins: return "cousins";
        case Primitive::children: return "children";
        case Primitive::niecesnephews: return "niecesnephews";
        case Primitive::coworkers: return "coworkers";
        case Primitive::friends: return "friends";
    }
    return "?";
}

std::optional<Primitive> primitive_from_name(const std::string& name) {
    for (Primitive p : {Primitive::parents, Primitive::siblings, Primitive::auntsuncles,
                        Primitive::cousins, Primitive::children, Primitive::niecesnephews,
                        Primitive::coworkers, Primitive::friends}) {
        if (name == primitive_name(p)) return p;
    }
    return std::nullopt;
}

const std::vector<std::string>& FamilyTree::slot(Primitive p) const {
    switch (p) {
        case Primitive::parents: return parents;
        case Primitive::siblings: return siblings;
        case Primitive::auntsuncles: return auntsuncles;
        case Primitive::cousins: return cousins;
        case Primitive::children: return children;
        case Primitive::niecesnephews: return niecesnephews;
        case Primitive::coworkers: return coworkers;
        case Primitive::friends: return friends;
    }
    return parents;
}

std::vector<std::string>& FamilyTree::slot(Primitive p) {
    return const_cast<std::vector<std::string>&>(static_cast<const FamilyTree*>(this)->slot(p));
}

const char* narowtype_name(NArowType t) {
    switch (t) {
        case NArowType::numeric: return "numeric";
        case NArowType::nonnegative_numeric: return "nonnegative_numeric";
        case NArowType::nonzero_numeric: return "nonzero_numeric";
        case NArowType::integer: return "integer";
        case NArowType::positive_numeric: return "positive_numeric";
        case NArowType::any: return "any";
    }
    return "?";
}

std::optional<NArowType> narowtype_from_name(const std::string& name) {
    for (NArowType t : {NArowType::numeric, NArowType::nonnegative_numeric,
                        NArowType::nonzero_numeric, NArowType::integer,
                        NArowType::positive_numeric, NArowType::any}) {
        if (name == narowtype_name(t)) return t;
    }
    // Accept a few shorthand spellings used in configuration files.
    if (name == "nonnegative") return NArowType::nonnegative_numeric;
    if (name == "nonzero") return NArowType::nonzero_numeric;
    if (name == "positive") return NArowType::positive_numeric;
    return std::nullopt;
}

const char* mlinfilltype_name(MLInfillType t) {
    switch (t) {
        case MLInfillType::numeric: return "numeric";
        case MLInfillType::binary: return "binary";
        case MLInfillType::ordinal: return "ordinal";
        case MLInfillType::multicolumn_categoric: return "multicolumn_categoric";
        case MLInfillType::exclude: return "exclude";
    }
    return "?";
}

std::optional<MLInfillType> mlinfilltype_from_name(const std::string& name) {
    for (MLInfillType t : {MLInfillType::numeric, MLInfillType::binary, MLInfillType::ordinal,
                           MLInfillType::multicolumn_categoric, MLInfillType::exclude}) {
        if (name == mlinfilltype_name(t)) return t;
    }
    if (name == "multicolumn") return MLInfillType::multicolumn_categoric;
    return std::nullopt;
}

void Registry::add(TransformCategory category) {
    if (category.id.empty()) {
        throw std::runtime_error("registry: category id must be nonempty");
    }
    categories_[category.id] = std::move(category);
}

bool Registry::contains(const std::string& id) const {
    return categories_.count(id) > 0;
}

const TransformCategory& Registry::at(const std::string& id) const {
    auto it = categories_.find(id);
    if (it == categories_.end()) {
        throw std::runtime_error("registry: unknown category id '" + id + "'");
    }
    return it->second;
}

std::vector<std::string> validate_registry(const Registry& registry) {
    std::vector<std::string> violations;
    for (const auto& [id, cat] : registry.categories()) {
        for (Primitive p : {Primitive::parents, Primitive::siblings, Primitive::auntsuncles,
                            Primitive::cousins, Primitive::children, Primitive::niecesnephews,
                            Primitive::coworkers, Primitive::friends}) {
            for (const auto& ref : cat.tree.slot(p)) {
                if (!registry.contains(ref)) {
                    violations.push_back("category '" + id + "' " + primitive_name(p) +
                                         " references undefined category '" + ref + "'");
                }
            }
        }
        if (cat.process.suffix.empty()) {
            violations.push_back("category '" + id + "' has an empty suffix");
        } else if (cat.process.suffix.find(kSeparator) != std::string::npos) {
            violations.push_back("category '" + id + "' suffix '" + cat.process.suffix +
                                 "' contains the separator character");
        }
        bool fit_ok = stage_fit_fn_exists(cat.process.fit_fn);
        bool apply_ok = stage_apply_fn_exists(cat.process.apply_fn);
        if (!fit_ok) {
            violations.push_back("category '" + id + "' fit_fn '" + cat.process.fit_fn +
                                 "' is not a known transform function");
        }
        if (!apply_ok) {
            violations.push_back("category '" + id + "' apply_fn '" + cat.process.apply_fn +
                                 "' is not a known transform function");
        }
        if (fit_ok && apply_ok && cat.process.fit_fn != cat.process.apply_fn) {
            int fc = stage_static_column_count(cat.process.fit_fn);
            int ac = stage_static_column_count(cat.process.apply_fn);
            if (fc < 0 || ac < 0 || fc != ac) {
                violations.push_back("category '" + id + "' fit_fn '" + cat.process.fit_fn +
                                     "' and apply_fn '" + cat.process.apply_fn +
                                     "' cannot be shown to agree on output column count");
            }
        }
        if (!cat.process.invert_fn.empty() && !stage_invert_fn_exists(cat.process.invert_fn)) {
            violations.push_back("category '" + id + "' invert_fn '" + cat.process.invert_fn +
                                 "' is not a known inverter");
        }
    }
    return violations;
}

}  // namespace tabtree
