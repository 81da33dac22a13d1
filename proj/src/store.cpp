#include "tabtree/store.hpp"

#include <stdexcept>

#include "json.hpp"

namespace tabtree {

using nlohmann::json;

namespace {

json param_value_to_json(const ParamValue& v) {
    if (const bool* b = std::get_if<bool>(&v)) return *b;
    if (const double* d = std::get_if<double>(&v)) return *d;
    if (const std::string* s = std::get_if<std::string>(&v)) return *s;
    return std::get<std::vector<double>>(v);
}

ParamValue param_value_from_json(const json& j) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) return j.get<std::vector<double>>();
    throw std::runtime_error("pipeline parse: unsupported parameter value type");
}

json params_to_json(const ParamMap& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = param_value_to_json(v);
    return j;
}

ParamMap params_from_json(const json& j) {
    ParamMap p;
    for (auto it = j.begin(); it != j.end(); ++it) p[it.key()] = param_value_from_json(it.value());
    return p;
}

json tree_to_json(const FamilyTree& t) {
    json j = json::object();
    for (Primitive p : {Primitive::parents, Primitive::siblings, Primitive::auntsuncles,
                        Primitive::cousins, Primitive::children, Primitive::niecesnephews,
                        Primitive::coworkers, Primitive::friends}) {
        j[primitive_name(p)] = t.slot(p);
    }
    return j;
}

FamilyTree tree_from_json(const json& j) {
    FamilyTree t;
    for (Primitive p : {Primitive::parents, Primitive::siblings, Primitive::auntsuncles,
                        Primitive::cousins, Primitive::children, Primitive::niecesnephews,
                        Primitive::coworkers, Primitive::friends}) {
        if (j.contains(primitive_name(p))) {
            t.slot(p) = j.at(primitive_name(p)).get<std::vector<std::string>>();
        }
    }
    return t;
}

json process_to_json(const ProcessEntry& e) {
    return json{{"fit_fn", e.fit_fn},
                {"apply_fn", e.apply_fn},
                {"invert_fn", e.invert_fn},
                {"narowtype", narowtype_name(e.narowtype)},
                {"mlinfilltype", mlinfilltype_name(e.mlinfilltype)},
                {"default_params", params_to_json(e.default_params)},
                {"suffix", e.suffix},
                {"full_information", e.full_information},
                {"labelctgy", e.labelctgy}};
}

ProcessEntry process_from_json(const json& j) {
    ProcessEntry e;
    e.fit_fn = j.at("fit_fn").get<std::string>();
    e.apply_fn = j.at("apply_fn").get<std::string>();
    e.invert_fn = j.value("invert_fn", std::string());
    auto nt = narowtype_from_name(j.at("narowtype").get<std::string>());
    auto mt = mlinfilltype_from_name(j.at("mlinfilltype").get<std::string>());
    if (!nt || !mt) throw std::runtime_error("pipeline parse: bad narowtype/mlinfilltype");
    e.narowtype = *nt;
    e.mlinfilltype = *mt;
    e.default_params = params_from_json(j.value("default_params", json::object()));
    e.suffix = j.at("suffix").get<std::string>();
    e.full_information = j.value("full_information", false);
    e.labelctgy = j.value("labelctgy", std::string());
    return e;
}

json registry_to_json(const Registry& r) {
    json j = json::object();
    for (const auto& [id, cat] : r.categories()) {
        j[id] = json{{"tree", tree_to_json(cat.tree)}, {"process", process_to_json(cat.process)}};
    }
    return j;
}

Registry registry_from_json(const json& j) {
    Registry r;
    for (auto it = j.begin(); it != j.end(); ++it) {
        TransformCategory cat;
        cat.id = it.key();
        cat.tree = tree_from_json(it.value().at("tree"));
        cat.process = process_from_json(it.value().at("process"));
        r.add(std::move(cat));
    }
    return r;
}

json stats_to_json(const BasisStats& s) {
    json j = json::object();
    if (const auto* b = std::get_if<NormBasis>(&s)) {
        j["kind"] = "norm";
        j["variant"] = static_cast<int>(b->variant);
        j["mu"] = b->mu;
        j["sigma"] = b->sigma;
        j["min"] = b->min;
        j["max"] = b->max;
        j["mad"] = b->mad;
        j["median"] = b->median;
        j["cap"] = b->cap_enabled;
        j["floor"] = b->floor_enabled;
        j["fill"] = b->fill;
    } else if (const auto* b = std::get_if<CatBasis>(&s)) {
        j["kind"] = "cat";
        j["variant"] = static_cast<int>(b->variant);
        j["levels"] = b->levels;
        j["column_count"] = b->column_count;
        j["unseen_code"] = b->unseen_code;
    } else if (const auto* b = std::get_if<BinBasis>(&s)) {
        j["kind"] = "bin";
        j["variant"] = static_cast<int>(b->variant);
        j["mode"] = static_cast<int>(b->mode);
        j["edges"] = b->edges;
        j["labels"] = b->labels;
        j["bin_count"] = b->bin_count;
        j["open_ended"] = b->open_ended;
        j["column_count"] = b->column_count;
    } else if (const auto* b = std::get_if<NoiseNumericBasis>(&s)) {
        j["kind"] = "noise_numeric";
        j["range"] = static_cast<int>(b->range);
        j["lower"] = b->lower;
        j["upper"] = b->upper;
    } else if (const auto* b = std::get_if<NoiseFlipBasis>(&s)) {
        j["kind"] = "noise_flip";
        j["level_count"] = b->level_count;
    } else if (const auto* b = std::get_if<MarkerBasis>(&s)) {
        j["kind"] = "marker";
        j["narowtype"] = narowtype_name(b->narowtype);
    } else if (std::get_if<PassthroughBasis>(&s)) {
        j["kind"] = "passthrough";
    } else if (const auto* b = std::get_if<DeltaBasis>(&s)) {
        j["kind"] = "delta";
        j["fill"] = b->fill;
        j["smoothed"] = b->smoothed;
    }
    return j;
}

BasisStats stats_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "norm") {
        NormBasis b;
        b.variant = static_cast<NormVariant>(j.at("variant").get<int>());
        b.mu = j.at("mu").get<double>();
        b.sigma = j.at("sigma").get<double>();
        b.min = j.at("min").get<double>();
        b.max = j.at("max").get<double>();
        b.mad = j.at("mad").get<double>();
        b.median = j.at("median").get<double>();
        b.cap_enabled = j.at("cap").get<bool>();
        b.floor_enabled = j.at("floor").get<bool>();
        b.fill = j.at("fill").get<double>();
        return b;
    }
    if (kind == "cat") {
        CatBasis b;
        b.variant = static_cast<CatVariant>(j.at("variant").get<int>());
        b.levels = j.at("levels").get<std::vector<std::string>>();
        b.column_count = j.at("column_count").get<int>();
        b.unseen_code = j.at("unseen_code").get<int>();
        return b;
    }
    if (kind == "bin") {
        BinBasis b;
        b.variant = static_cast<BinVariant>(j.at("variant").get<int>());
        b.mode = static_cast<BinOutputMode>(j.at("mode").get<int>());
        b.edges = j.at("edges").get<std::vector<double>>();
        b.labels = j.at("labels").get<std::vector<std::string>>();
        b.bin_count = j.at("bin_count").get<int>();
        b.open_ended = j.at("open_ended").get<bool>();
        b.column_count = j.at("column_count").get<int>();
        return b;
    }
    if (kind == "noise_numeric") {
        NoiseNumericBasis b;
        b.range = static_cast<NoiseRange>(j.at("range").get<int>());
        b.lower = j.at("lower").get<double>();
        b.upper = j.at("upper").get<double>();
        return b;
    }
    if (kind == "noise_flip") {
        NoiseFlipBasis b;
        b.level_count = j.at("level_count").get<int>();
        return b;
    }
    if (kind == "marker") {
        MarkerBasis b;
        auto nt = narowtype_from_name(j.at("narowtype").get<std::string>());
        if (!nt) throw std::runtime_error("pipeline parse: bad marker narowtype");
        b.narowtype = *nt;
        return b;
    }
    if (kind == "passthrough") return PassthroughBasis{};
    if (kind == "delta") {
        DeltaBasis b;
        b.fill = j.at("fill").get<double>();
        b.smoothed = j.at("smoothed").get<bool>();
        return b;
    }
    throw std::runtime_error("pipeline parse: unknown basis kind '" + kind + "'");
}

json basis_to_json(const FittedColumnBasis& b) {
    return json{{"returned_header", b.returned_header},
                {"source_header", b.source_header},
                {"category_id", b.category_id},
                {"suffix_chain", b.suffix_chain},
                {"stats", stats_to_json(b.stats)},
                {"params", params_to_json(b.params)},
                {"retained", b.retained},
                {"generation", b.generation},
                {"column_count", b.column_count}};
}

FittedColumnBasis basis_from_json(const json& j) {
    FittedColumnBasis b;
    b.returned_header = j.at("returned_header").get<std::string>();
    b.source_header = j.at("source_header").get<std::string>();
    b.category_id = j.at("category_id").get<std::string>();
    b.suffix_chain = j.at("suffix_chain").get<std::vector<std::string>>();
    b.stats = stats_from_json(j.at("stats"));
    b.params = params_from_json(j.at("params"));
    b.retained = j.at("retained").get<bool>();
    b.generation = j.at("generation").get<int>();
    b.column_count = j.at("column_count").get<int>();
    return b;
}

json forest_to_json(const Forest& f) {
    json trees = json::array();
    for (const auto& t : f.trees) {
        json nodes = json::array();
        for (const auto& n : t.nodes) {
            nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
        }
        trees.push_back(std::move(nodes));
    }
    return json{{"classification", f.classification}, {"classes", f.classes}, {"trees", trees}};
}

Forest forest_from_json(const json& j) {
    Forest f;
    f.classification = j.at("classification").get<bool>();
    f.classes = j.at("classes").get<std::vector<double>>();
    for (const auto& tj : j.at("trees")) {
        DecisionTree t;
        for (const auto& nj : tj) {
            TreeNode n;
            n.feature = nj.at(0).get<int>();
            n.threshold = nj.at(1).get<double>();
            n.left = nj.at(2).get<int>();
            n.right = nj.at(3).get<int>();
            n.value = nj.at(4).get<double>();
            t.nodes.push_back(n);
        }
        f.trees.push_back(std::move(t));
    }
    return f;
}

json fill_to_json(const ColumnFillBasis& c) {
    return json{{"strategy", infill_strategy_name(c.strategy)},
                {"fill_numbers", c.fill_numbers},
                {"fill_level", c.fill_level},
                {"has_level", c.has_level}};
}

ColumnFillBasis fill_from_json(const json& j) {
    ColumnFillBasis c;
    auto s = infill_strategy_from_name(j.at("strategy").get<std::string>());
    if (!s) throw std::runtime_error("pipeline parse: bad infill strategy");
    c.strategy = *s;
    c.fill_numbers = j.at("fill_numbers").get<std::vector<double>>();
    c.fill_level = j.at("fill_level").get<std::string>();
    c.has_level = j.at("has_level").get<bool>();
    return c;
}

json group_infill_to_json(const GroupInfill& g) {
    json fills = json::array();
    for (const auto& f : g.column_fills) fills.push_back(fill_to_json(f));
    json models = json::array();
    for (const auto& m : g.models) models.push_back(forest_to_json(m));
    return json{{"group_base", g.group_base},
                {"strategy", infill_strategy_name(g.strategy)},
                {"column_fills", fills},
                {"fill_level", g.fill_level},
                {"has_level", g.has_level},
                {"models", models},
                {"feature_headers", g.feature_headers},
                {"uses_model", g.uses_model}};
}

GroupInfill group_infill_from_json(const json& j) {
    GroupInfill g;
    g.group_base = j.at("group_base").get<std::string>();
    auto s = infill_strategy_from_name(j.at("strategy").get<std::string>());
    if (!s) throw std::runtime_error("pipeline parse: bad infill strategy");
    g.strategy = *s;
    for (const auto& fj : j.at("column_fills")) g.column_fills.push_back(fill_from_json(fj));
    g.fill_level = j.at("fill_level").get<std::string>();
    g.has_level = j.at("has_level").get<bool>();
    for (const auto& mj : j.at("models")) g.models.push_back(forest_from_json(mj));
    g.feature_headers = j.at("feature_headers").get<std::vector<std::string>>();
    g.uses_model = j.at("uses_model").get<bool>();
    return g;
}

json source_to_json(const SourceColumnRecord& s) {
    json bases = json::array();
    for (const auto& b : s.bases) bases.push_back(basis_to_json(b));
    json infill = json::array();
    for (const auto& g : s.infill) infill.push_back(group_infill_to_json(g));
    return json{{"header", s.header},
                {"root_id", s.root_id},
                {"bases", bases},
                {"retained_headers", s.retained_headers},
                {"retained_groups", s.retained_groups},
                {"strategy", infill_strategy_name(s.strategy)},
                {"infill", infill}};
}

SourceColumnRecord source_from_json(const json& j) {
    SourceColumnRecord s;
    s.header = j.at("header").get<std::string>();
    s.root_id = j.at("root_id").get<std::string>();
    for (const auto& bj : j.at("bases")) s.bases.push_back(basis_from_json(bj));
    s.retained_headers = j.at("retained_headers").get<std::vector<std::string>>();
    s.retained_groups = j.at("retained_groups").get<std::vector<std::string>>();
    auto st = infill_strategy_from_name(j.at("strategy").get<std::string>());
    if (!st) throw std::runtime_error("pipeline parse: bad infill strategy");
    s.strategy = *st;
    for (const auto& gj : j.at("infill")) s.infill.push_back(group_infill_from_json(gj));
    return s;
}

json string_map_to_json(const std::map<std::string, std::vector<std::string>>& m) {
    json j = json::object();
    for (const auto& [k, v] : m) j[k] = v;
    return j;
}

std::map<std::string, std::vector<std::string>> string_map_from_json(const json& j) {
    std::map<std::string, std::vector<std::string>> m;
    for (auto it = j.begin(); it != j.end(); ++it) {
        m[it.key()] = it.value().get<std::vector<std::string>>();
    }
    return m;
}

json config_to_json(const PipelineConfig& c) {
    json default_params = json::object();
    for (const auto& [cat, p] : c.default_params) default_params[cat] = params_to_json(p);
    json column_params = json::object();
    for (const auto& [cat, cols] : c.column_params) {
        json inner = json::object();
        for (const auto& [col, p] : cols) inner[col] = params_to_json(p);
        column_params[cat] = inner;
    }
    return json{{"labels_column", c.labels_column},
                {"assigncat", string_map_to_json(c.assigncat)},
                {"global_params", params_to_json(c.global_params)},
                {"default_params", default_params},
                {"column_params", column_params},
                {"assigninfill", string_map_to_json(c.assigninfill)},
                {"valpercent", c.valpercent},
                {"shuffletrain", c.shuffletrain},
                {"noise_augment", c.noise_augment},
                {"master_seed", c.master_seed},
                {"default_numeric_root", c.default_numeric_root},
                {"default_categoric_root", c.default_categoric_root},
                {"numeric_sniff_threshold", c.numeric_sniff_threshold},
                {"max_depth", c.max_depth}};
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    c.labels_column = j.at("labels_column").get<std::string>();
    c.assigncat = string_map_from_json(j.at("assigncat"));
    c.global_params = params_from_json(j.at("global_params"));
    for (auto it = j.at("default_params").begin(); it != j.at("default_params").end(); ++it) {
        c.default_params[it.key()] = params_from_json(it.value());
    }
    for (auto it = j.at("column_params").begin(); it != j.at("column_params").end(); ++it) {
        for (auto col = it.value().begin(); col != it.value().end(); ++col) {
            c.column_params[it.key()][col.key()] = params_from_json(col.value());
        }
    }
    c.assigninfill = string_map_from_json(j.at("assigninfill"));
    c.valpercent = j.at("valpercent").get<double>();
    c.shuffletrain = j.at("shuffletrain").get<bool>();
    c.noise_augment = j.at("noise_augment").get<int>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.default_numeric_root = j.at("default_numeric_root").get<std::string>();
    c.default_categoric_root = j.at("default_categoric_root").get<std::string>();
    c.numeric_sniff_threshold = j.at("numeric_sniff_threshold").get<double>();
    c.max_depth = j.at("max_depth").get<int>();
    return c;
}

json report_to_json(const ColumntypeReport& r) {
    json sets = json::object();
    for (const auto& [k, groups] : r.sets) sets[k] = groups;
    return json{{"classes", string_map_to_json(r.classes)}, {"sets", sets}};
}

ColumntypeReport report_from_json(const json& j) {
    ColumntypeReport r;
    r.classes = string_map_from_json(j.at("classes"));
    for (auto it = j.at("sets").begin(); it != j.at("sets").end(); ++it) {
        r.sets[it.key()] = it.value().get<std::vector<std::vector<std::string>>>();
    }
    return r;
}

}  // namespace

std::string serialize_pipeline(const PipelineStore& store) {
    json j;
    j["version"] = store.version;
    j["master_seed"] = store.master_seed;
    j["registry"] = registry_to_json(store.registry);
    j["config"] = config_to_json(store.config);
    json sources = json::array();
    for (const auto& s : store.sources) sources.push_back(source_to_json(s));
    j["sources"] = sources;
    j["labels"] = store.labels ? source_to_json(*store.labels) : json();
    j["report"] = report_to_json(store.report);
    return j.dump(2) + "\n";
}

PipelineStore deserialize_pipeline(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("pipeline parse error at byte " + std::to_string(e.byte) + ": " +
                                 e.what());
    }
    try {
        PipelineStore store;
        store.version = j.at("version").get<std::string>();
        if (store.version != "tabtree/1") {
            throw std::runtime_error("unsupported pipeline version '" + store.version + "'");
        }
        store.master_seed = j.at("master_seed").get<std::uint64_t>();
        store.registry = registry_from_json(j.at("registry"));
        store.config = config_from_json(j.at("config"));
        for (const auto& sj : j.at("sources")) store.sources.push_back(source_from_json(sj));
        if (!j.at("labels").is_null()) store.labels = source_from_json(j.at("labels"));
        store.report = report_from_json(j.at("report"));
        return store;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("pipeline parse: malformed store: ") + e.what());
    }
}

}  // namespace tabtree
