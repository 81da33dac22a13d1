#include "tabtree/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tabtree {

using nlohmann::json;

namespace {

ParamValue param_value_from_json(const json& j) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) return j.get<std::vector<double>>();
    throw std::runtime_error("config: unsupported parameter value type");
}

json param_value_to_json(const ParamValue& v) {
    if (const bool* b = std::get_if<bool>(&v)) return *b;
    if (const double* d = std::get_if<double>(&v)) return *d;
    if (const std::string* s = std::get_if<std::string>(&v)) return *s;
    return std::get<std::vector<double>>(v);
}

ParamMap params_from_json(const json& j) {
    ParamMap p;
    for (auto it = j.begin(); it != j.end(); ++it) p[it.key()] = param_value_from_json(it.value());
    return p;
}

json params_to_json(const ParamMap& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = param_value_to_json(v);
    return j;
}

std::map<std::string, std::vector<std::string>> header_lists_from_json(const json& j,
                                                                       const char* what) {
    std::map<std::string, std::vector<std::string>> out;
    if (!j.is_object()) throw std::runtime_error(std::string("config: ") + what + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        out[it.key()] = it.value().get<std::vector<std::string>>();
    }
    return out;
}

void parse_assignparam(const json& j, PipelineConfig& cfg) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "global_assignparam") {
            cfg.global_params = params_from_json(it.value());
        } else if (it.key() == "default_assignparam") {
            for (auto cat = it.value().begin(); cat != it.value().end(); ++cat) {
                cfg.default_params[cat.key()] = params_from_json(cat.value());
            }
        } else {
            // Per-category per-column overrides.
            for (auto col = it.value().begin(); col != it.value().end(); ++col) {
                cfg.column_params[it.key()][col.key()] = params_from_json(col.value());
            }
        }
    }
}

void parse_pipeline_section(const json& j, ConfigFile& out) {
    PipelineConfig& cfg = out.pipeline;
    static const std::set<std::string> known = {
        "labels_column", "assigncat", "assignparam", "assigninfill", "valpercent",
        "shuffletrain", "noise_augment", "randomseed", "master_seed",
        "default_numeric_root", "default_categoric_root", "numeric_sniff_threshold", "max_depth"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            out.warnings.push_back("config: pipeline key '" + it.key() +
                                   "' is accepted but has no effect");
        }
    }
    if (j.contains("labels_column") && !j.at("labels_column").is_boolean()) {
        cfg.labels_column = j.at("labels_column").get<std::string>();
    }
    if (j.contains("assigncat")) cfg.assigncat = header_lists_from_json(j.at("assigncat"), "assigncat");
    if (j.contains("assignparam")) parse_assignparam(j.at("assignparam"), cfg);
    if (j.contains("assigninfill")) {
        cfg.assigninfill = header_lists_from_json(j.at("assigninfill"), "assigninfill");
    }
    if (j.contains("valpercent")) cfg.valpercent = j.at("valpercent").get<double>();
    if (j.contains("shuffletrain")) cfg.shuffletrain = j.at("shuffletrain").get<bool>();
    if (j.contains("noise_augment")) cfg.noise_augment = j.at("noise_augment").get<int>();
    if (j.contains("randomseed")) cfg.master_seed = j.at("randomseed").get<std::uint64_t>();
    if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("default_numeric_root")) {
        cfg.default_numeric_root = j.at("default_numeric_root").get<std::string>();
    }
    if (j.contains("default_categoric_root")) {
        cfg.default_categoric_root = j.at("default_categoric_root").get<std::string>();
    }
    if (j.contains("numeric_sniff_threshold")) {
        cfg.numeric_sniff_threshold = j.at("numeric_sniff_threshold").get<double>();
    }
    if (j.contains("max_depth")) cfg.max_depth = j.at("max_depth").get<int>();
}

FamilyTree tree_from_config(const json& j) {
    FamilyTree t;
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto p = primitive_from_name(it.key());
        if (!p) {
            throw std::runtime_error("config: transformdict slot '" + it.key() +
                                     "' is not a family tree primitive");
        }
        t.slot(*p) = it.value().get<std::vector<std::string>>();
    }
    return t;
}

ProcessEntry process_from_config(const std::string& id, const json& j, const Registry& base,
                                 const std::vector<TransformCategory>& so_far) {
    ProcessEntry e;
    bool seeded = false;
    if (j.contains("functionpointer")) {
        std::string target = j.at("functionpointer").get<std::string>();
        const TransformCategory* found = nullptr;
        if (base.contains(target)) {
            found = &base.at(target);
        } else {
            for (const auto& c : so_far) {
                if (c.id == target) found = &c;
            }
        }
        if (!found) {
            throw std::runtime_error("config: functionpointer target '" + target +
                                     "' is not a known category");
        }
        e = found->process;
        seeded = true;
    }
    if (j.contains("fit_fn")) {
        e.fit_fn = j.at("fit_fn").get<std::string>();
        seeded = true;
    }
    if (j.contains("apply_fn")) e.apply_fn = j.at("apply_fn").get<std::string>();
    if (!j.contains("apply_fn") && j.contains("fit_fn")) e.apply_fn = e.fit_fn;
    if (j.contains("invert_fn")) e.invert_fn = j.at("invert_fn").get<std::string>();
    if (!seeded) {
        throw std::runtime_error("config: processdict entry '" + id +
                                 "' needs a functionpointer or an explicit fit_fn");
    }
    if (j.contains("NArowtype")) {
        auto nt = narowtype_from_name(j.at("NArowtype").get<std::string>());
        if (!nt) throw std::runtime_error("config: bad NArowtype for '" + id + "'");
        e.narowtype = *nt;
    }
    if (j.contains("MLinfilltype")) {
        auto mt = mlinfilltype_from_name(j.at("MLinfilltype").get<std::string>());
        if (!mt) throw std::runtime_error("config: bad MLinfilltype for '" + id + "'");
        e.mlinfilltype = *mt;
    }
    if (j.contains("labelctgy")) e.labelctgy = j.at("labelctgy").get<std::string>();
    if (j.contains("suffix")) e.suffix = j.at("suffix").get<std::string>();
    if (e.suffix.empty()) e.suffix = id;
    if (j.contains("full_information")) e.full_information = j.at("full_information").get<bool>();
    if (j.contains("default_params")) {
        e.default_params = merge_params(e.default_params, params_from_json(j.at("default_params")));
    }
    return e;
}

}  // namespace

ConfigFile parse_config_text(const std::string& json_text, const Registry& base) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config parse error at byte " + std::to_string(e.byte) + ": " +
                                 e.what());
    }
    ConfigFile out;
    if (j.contains("pipeline")) parse_pipeline_section(j.at("pipeline"), out);

    std::map<std::string, FamilyTree> trees;
    if (j.contains("transformdict")) {
        for (auto it = j.at("transformdict").begin(); it != j.at("transformdict").end(); ++it) {
            trees[it.key()] = tree_from_config(it.value());
        }
    }
    if (j.contains("processdict")) {
        for (auto it = j.at("processdict").begin(); it != j.at("processdict").end(); ++it) {
            TransformCategory cat;
            cat.id = it.key();
            cat.process = process_from_config(cat.id, it.value(), base, out.extensions);
            auto t = trees.find(cat.id);
            if (t != trees.end()) {
                cat.tree = t->second;
                trees.erase(t);
            }
            out.extensions.push_back(std::move(cat));
        }
    }
    for (const auto& [id, tree] : trees) {
        throw std::runtime_error("config: transformdict entry '" + id +
                                 "' has no matching processdict entry");
    }
    return out;
}

ConfigFile load_config(const std::string& path, const Registry& base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), base);
}

std::string emit_config_text(const ConfigFile& config) {
    const PipelineConfig& c = config.pipeline;
    json assignparam = json::object();
    assignparam["global_assignparam"] = params_to_json(c.global_params);
    json defaults = json::object();
    for (const auto& [cat, p] : c.default_params) defaults[cat] = params_to_json(p);
    assignparam["default_assignparam"] = defaults;
    for (const auto& [cat, cols] : c.column_params) {
        json inner = json::object();
        for (const auto& [col, p] : cols) inner[col] = params_to_json(p);
        assignparam[cat] = inner;
    }

    json assigncat = json::object();
    for (const auto& [root, headers] : c.assigncat) assigncat[root] = headers;
    json assigninfill = json::object();
    for (const auto& [s, headers] : c.assigninfill) assigninfill[s] = headers;

    json pipeline = {{"labels_column", c.labels_column},
                     {"assigncat", assigncat},
                     {"assignparam", assignparam},
                     {"assigninfill", assigninfill},
                     {"valpercent", c.valpercent},
                     {"shuffletrain", c.shuffletrain},
                     {"noise_augment", c.noise_augment},
                     {"master_seed", c.master_seed},
                     {"default_numeric_root", c.default_numeric_root},
                     {"default_categoric_root", c.default_categoric_root},
                     {"numeric_sniff_threshold", c.numeric_sniff_threshold},
                     {"max_depth", c.max_depth}};

    json transformdict = json::object();
    json processdict = json::object();
    for (const auto& cat : config.extensions) {
        json tree = json::object();
        for (Primitive p : {Primitive::parents, Primitive::siblings, Primitive::auntsuncles,
                            Primitive::cousins, Primitive::children, Primitive::niecesnephews,
                            Primitive::coworkers, Primitive::friends}) {
            tree[primitive_name(p)] = cat.tree.slot(p);
        }
        transformdict[cat.id] = tree;
        processdict[cat.id] = json{{"fit_fn", cat.process.fit_fn},
                                   {"apply_fn", cat.process.apply_fn},
                                   {"invert_fn", cat.process.invert_fn},
                                   {"NArowtype", narowtype_name(cat.process.narowtype)},
                                   {"MLinfilltype", mlinfilltype_name(cat.process.mlinfilltype)},
                                   {"labelctgy", cat.process.labelctgy},
                                   {"suffix", cat.process.suffix},
                                   {"full_information", cat.process.full_information},
                                   {"default_params", params_to_json(cat.process.default_params)}};
    }

    json out = {{"pipeline", pipeline},
                {"transformdict", transformdict},
                {"processdict", processdict}};
    return out.dump(2) + "\n";
}

Registry registry_with_extensions(const Registry& base,
                                  const std::vector<TransformCategory>& extensions) {
    Registry r = base;
    for (const auto& cat : extensions) r.add(cat);
    return r;
}

}  // namespace tabtree
