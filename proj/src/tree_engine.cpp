#include "tabtree/tree_engine.hpp"

#include <set>
#include <stdexcept>

#include "tabtree/infill.hpp"
#include "tabtree/rng.hpp"
#include "tabtree/stages.hpp"

namespace tabtree {

ParamLookup no_param_overrides() {
    return [](const std::string&) { return ParamMap{}; };
}

namespace {

std::vector<bool> or_masks(const std::vector<bool>& a, const std::vector<bool>& b) {
    std::vector<bool> out(std::max(a.size(), b.size()), false);
    for (std::size_t i = 0; i < out.size(); ++i) {
        bool av = i < a.size() && a[i];
        bool bv = i < b.size() && b[i];
        out[i] = av || bv;
    }
    return out;
}

std::string chain_to_string(const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += " -> ";
        out += id;
    }
    return out;
}

struct Walker {
    const Registry& reg;
    const ParamLookup* params = nullptr;
    std::uint64_t master_seed = 0;
    int max_depth = 16;
    bool fitting = true;
    bool traindata = true;
    std::uint64_t copy_index = 0;
    std::string source_header;
    NArowType root_narowtype = NArowType::any;
    std::vector<FittedColumnBasis>* bases = nullptr;
    const std::map<std::string, const FittedColumnBasis*>* stored = nullptr;
    std::set<std::string> emitted;

    std::vector<ColumnOut> run_entry(const std::string& cat_id, const ColumnData& input,
                                     const std::vector<bool>& input_mask, int generation,
                                     Primitive slot, std::vector<std::string> id_chain,
                                     std::vector<std::string> suffix_chain,
                                     TraversalNode* node_out) {
        id_chain.push_back(cat_id);
        if (static_cast<int>(id_chain.size()) > max_depth) {
            throw std::runtime_error("tree traversal exceeded max depth " +
                                     std::to_string(max_depth) + " (recursive definition?): " +
                                     chain_to_string(id_chain));
        }
        const TransformCategory& cat = reg.at(cat_id);
        const ProcessEntry& pe = cat.process;
        const std::string out_base = input.header + kSeparator + pe.suffix;
        if (!emitted.insert(out_base).second) {
            throw std::runtime_error("tree traversal produced duplicate header '" + out_base +
                                     "' (chain: " + chain_to_string(id_chain) + ")");
        }
        suffix_chain.push_back(pe.suffix);

        Rng rng(derive_seed(master_seed, {source_header, out_base, fitting ? "fit" : "apply",
                                          std::to_string(copy_index)}));
        StageContext ctx;
        ctx.root_narowtype = root_narowtype;
        ctx.traindata = traindata;
        ctx.rng = &rng;

        std::vector<ColumnData> cols;
        std::vector<bool> stage_invalid;
        std::size_t basis_index = 0;
        if (fitting) {
            ParamMap resolved = merge_params(pe.default_params, (*params)(cat_id));
            StageFitResult res = stage_fit(pe.fit_fn, input, out_base, resolved, ctx);
            FittedColumnBasis b;
            b.returned_header = out_base;
            b.source_header = source_header;
            b.category_id = cat_id;
            b.suffix_chain = suffix_chain;
            b.stats = std::move(res.stats);
            b.params = std::move(resolved);
            b.generation = generation;
            b.column_count = res.column_count;
            basis_index = bases->size();
            bases->push_back(std::move(b));
            cols = std::move(res.cols);
            stage_invalid = std::move(res.invalid);
        } else {
            auto it = stored->find(out_base);
            if (it == stored->end()) {
                throw std::runtime_error("apply_tree: no fitted basis for '" + out_base +
                                         "'; the stored pipeline does not match this registry");
            }
            const FittedColumnBasis& b = *it->second;
            StageApplyResult res = stage_apply(pe.apply_fn, b.stats, input, out_base, b.params, ctx);
            cols = std::move(res.cols);
            stage_invalid = std::move(res.invalid);
        }

        std::vector<bool> cum_mask = or_masks(input_mask, stage_invalid);

        if (node_out) {
            node_out->category_id = cat_id;
            node_out->slot = slot;
            node_out->generation = generation;
            node_out->input_header = input.header;
            for (const auto& c : cols) node_out->output_headers.push_back(c.header);
        }

        std::vector<ColumnOut> downstream;
        bool replaced = false;
        if (primitive_has_offspring(slot)) {
            for (Primitive d : kDownstreamPrimitives) {
                for (const auto& entry : cat.tree.slot(d)) {
                    for (const auto& col : cols) {
                        TraversalNode child;
                        auto sub = run_entry(entry, col, cum_mask, generation + 1, d, id_chain,
                                             suffix_chain, node_out ? &child : nullptr);
                        if (node_out) node_out->children.push_back(std::move(child));
                        downstream.insert(downstream.end(), sub.begin(), sub.end());
                    }
                    if (primitive_replaces(d)) replaced = true;
                }
            }
        }

        if (fitting) (*bases)[basis_index].retained = !replaced;

        std::vector<ColumnOut> result;
        if (!replaced) {
            for (auto& col : cols) {
                result.push_back(ColumnOut{std::move(col), cum_mask, out_base});
            }
        }
        result.insert(result.end(), std::make_move_iterator(downstream.begin()),
                      std::make_move_iterator(downstream.end()));
        return result;
    }
};

}  // namespace

TreeFitResult fit_tree(const ColumnData& source, const std::string& root_id,
                       const Registry& registry, const ParamLookup& params,
                       std::uint64_t master_seed, int max_depth) {
    const TransformCategory& root = registry.at(root_id);
    TreeFitResult out;
    out.mask = compute_narw_mask(source, root.process.narowtype);

    Walker walker{registry, &params, master_seed, max_depth, true, true, 0,
                  source.header, root.process.narowtype, &out.bases, nullptr, {}};

    std::vector<bool> none(source.size(), false);
    for (Primitive u : kUpstreamPrimitives) {
        for (const auto& entry : root.tree.slot(u)) {
            TraversalNode node;
            auto sub = walker.run_entry(entry, source, none, 0, u, {root_id}, {}, &node);
            out.nodes.push_back(std::move(node));
            out.retained.insert(out.retained.end(), std::make_move_iterator(sub.begin()),
                                std::make_move_iterator(sub.end()));
        }
    }

    out.source_retained = root.tree.parents.empty() && root.tree.auntsuncles.empty();
    if (out.source_retained) {
        out.retained.insert(out.retained.begin(), ColumnOut{source, none, source.header});
    }
    return out;
}

TreeApplyResult apply_tree(const std::vector<FittedColumnBasis>& bases, const ColumnData& column,
                           const std::string& root_id, const Registry& registry, bool traindata,
                           std::uint64_t master_seed, std::uint64_t copy_index, int max_depth) {
    if (!bases.empty() && bases.front().source_header != column.header) {
        throw std::runtime_error("apply_tree: column header '" + column.header +
                                 "' does not match fitted source '" +
                                 bases.front().source_header + "'");
    }
    std::map<std::string, const FittedColumnBasis*> stored;
    for (const auto& b : bases) stored[b.returned_header] = &b;

    const TransformCategory& root = registry.at(root_id);
    Walker walker{registry, nullptr, master_seed, max_depth, false, traindata, copy_index,
                  column.header, root.process.narowtype, nullptr, &stored, {}};

    TreeApplyResult out;
    std::vector<bool> none(column.size(), false);
    for (Primitive u : kUpstreamPrimitives) {
        for (const auto& entry : root.tree.slot(u)) {
            auto sub = walker.run_entry(entry, column, none, 0, u, {root_id}, {}, nullptr);
            out.retained.insert(out.retained.end(), std::make_move_iterator(sub.begin()),
                                std::make_move_iterator(sub.end()));
        }
    }
    if (root.tree.parents.empty() && root.tree.auntsuncles.empty()) {
        out.retained.insert(out.retained.begin(), ColumnOut{column, none, column.header});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Builtin registry

namespace {

FamilyTree tree_of(std::vector<std::string> parents, std::vector<std::string> siblings,
                   std::vector<std::string> auntsuncles, std::vector<std::string> cousins,
                   std::vector<std::string> children = {},
                   std::vector<std::string> niecesnephews = {},
                   std::vector<std::string> coworkers = {},
                   std::vector<std::string> friends = {}) {
    FamilyTree t;
    t.parents = std::move(parents);
    t.siblings = std::move(siblings);
    t.auntsuncles = std::move(auntsuncles);
    t.cousins = std::move(cousins);
    t.children = std::move(children);
    t.niecesnephews = std::move(niecesnephews);
    t.coworkers = std::move(coworkers);
    t.friends = std::move(friends);
    return t;
}

TransformCategory make_cat(std::string id, FamilyTree tree, std::string fn, std::string suffix,
                           NArowType narowtype, MLInfillType mlinfilltype, std::string invert_fn,
                           bool full_information, ParamMap defaults = {}) {
    TransformCategory c;
    c.id = std::move(id);
    c.tree = std::move(tree);
    c.process.fit_fn = fn;
    c.process.apply_fn = std::move(fn);
    c.process.invert_fn = std::move(invert_fn);
    c.process.narowtype = narowtype;
    c.process.mlinfilltype = mlinfilltype;
    c.process.suffix = std::move(suffix);
    c.process.full_information = full_information;
    c.process.default_params = std::move(defaults);
    return c;
}

Registry build_builtin_registry() {
    Registry r;
    const auto num = NArowType::numeric;
    const auto any = NArowType::any;

    // Markers and passthrough.
    r.add(make_cat("NArw", {}, "NArw", "NArw", any, MLInfillType::exclude, "", false));
    r.add(make_cat("excl", tree_of({}, {}, {"excl"}, {}), "excl", "excl", any,
                   MLInfillType::exclude, "identity", true));

    // Normalizations.
    auto norm = [&](const std::string& id, NArowType nt) {
        r.add(make_cat(id, tree_of({id}, {}, {}, {"NArw"}), id, id, nt, MLInfillType::numeric,
                       "norm", true));
    };
    norm("nmbr", num);
    norm("mnmx", num);
    norm("mean", num);
    norm("MAD3", num);
    norm("retn", num);
    norm("lgnm", NArowType::positive_numeric);

    // Categoric encodings.
    auto cat = [&](const std::string& id, MLInfillType ml) {
        r.add(make_cat(id, tree_of({id}, {}, {}, {"NArw"}), id, id, any, ml, "encoding", true));
    };
    cat("bnry", MLInfillType::binary);
    cat("ordl", MLInfillType::ordinal);
    cat("ord3", MLInfillType::ordinal);
    cat("onht", MLInfillType::multicolumn_categoric);
    cat("1010", MLInfillType::multicolumn_categoric);

    // Binning families: one category per variant and output mode.
    struct BinFamily {
        const char* onehot;
        const char* ordinal;
        const char* binary;
        const char* variant;
        NArowType narowtype;
        ParamMap extra;
    };
    const std::vector<BinFamily> bin_families = {
        {"bins", "bsor", "bsbn", "stdev", num, {{"bincount", 6.0}}},
        {"pwrs", "pwor", "pwbn", "pwrs", NArowType::positive_numeric, {}},
        {"pwr2", "por2", "por3", "pwr2", NArowType::nonzero_numeric, {}},
        {"bnwd", "bnwo", "bnwb", "fixed_width", num, {}},
        {"bnep", "bneo", "bneb", "equal_population", num, {{"bincount", 6.0}}},
        {"bkt1", "bkt3", "bkb3", "user_open", num, {}},
        {"bkt2", "bkt4", "bkb4", "user_bounded", num, {}},
    };
    for (const auto& fam : bin_families) {
        auto add_bin = [&](const std::string& id, const char* mode, MLInfillType ml) {
            ParamMap defaults = fam.extra;
            defaults["bin_variant"] = std::string(fam.variant);
            defaults["bin_mode"] = std::string(mode);
            r.add(make_cat(id, tree_of({id}, {}, {}, {"NArw"}), "bins", id, fam.narowtype, ml, "",
                           false, std::move(defaults)));
        };
        add_bin(fam.onehot, "onehot", MLInfillType::multicolumn_categoric);
        add_bin(fam.ordinal, "ordinal", MLInfillType::ordinal);
        add_bin(fam.binary, "binary", MLInfillType::multicolumn_categoric);
    }

    // Numeric noise: normalization upstream, injection replacing it
    // downstream via a coworkers entry, exactly the Fig 1 wiring.
    ParamMap noise_defaults = {{"mu", 0.0}, {"sigma", 0.03}, {"flip_prob", 0.03}};
    auto noise_numeric = [&](const std::string& id, const std::string& helper,
                             const std::string& norm_id, const std::string& range) {
        ParamMap defaults = noise_defaults;
        defaults["noise_range"] = range;
        r.add(make_cat(id, tree_of({helper}, {}, {}, {"NArw"}), "noise_numeric", id, num,
                       MLInfillType::numeric, "identity", false, std::move(defaults)));
        r.add(make_cat(helper, tree_of({}, {}, {}, {}, {}, {}, {id}, {}), norm_id, norm_id, num,
                       MLInfillType::numeric, "norm", true));
    };
    noise_numeric("DPnb", "DPn2", "nmbr", "none");
    noise_numeric("DPmm", "DPm2", "mnmx", "unit");
    noise_numeric("DPrt", "DPr2", "retn", "retn");

    // Categoric noise: ordinal-stage encode, flip, optional re-encode
    // (Fig 2). The flip function is logged with the DPod suffix.
    ParamMap flip_defaults = {{"flip_prob", 0.03}};
    r.add(make_cat("DPbn", tree_of({"DPb2"}, {}, {}, {"NArw"}), "noise_flip", "DPbn", any,
                   MLInfillType::binary, "identity", false, flip_defaults));
    r.add(make_cat("DPb2", tree_of({}, {}, {}, {}, {}, {}, {"DPbn"}, {}), "bnry", "bnry", any,
                   MLInfillType::binary, "encoding", true));

    r.add(make_cat("DPod", tree_of({"DPo2"}, {}, {}, {"NArw"}), "noise_flip", "DPod", any,
                   MLInfillType::ordinal, "identity", false, flip_defaults));
    r.add(make_cat("DPo2", tree_of({}, {}, {}, {}, {}, {}, {"DPod"}, {}), "ord3", "ord3", any,
                   MLInfillType::ordinal, "encoding", true));

    r.add(make_cat("DPoh", tree_of({"DPo7"}, {}, {}, {"NArw"}), "noise_flip", "DPoh", any,
                   MLInfillType::multicolumn_categoric, "identity", false, flip_defaults));
    r.add(make_cat("DPo7", tree_of({}, {}, {}, {}, {"DPo8"}, {}, {}, {}), "ord3", "ord3", any,
                   MLInfillType::ordinal, "encoding", true));
    r.add(make_cat("DPo8", tree_of({}, {}, {}, {}, {}, {}, {"onht"}, {}), "noise_flip", "DPod",
                   any, MLInfillType::ordinal, "identity", false, flip_defaults));

    r.add(make_cat("DP10", tree_of({"DPo6"}, {}, {}, {"NArw"}), "noise_flip", "DP10", any,
                   MLInfillType::multicolumn_categoric, "identity", false, flip_defaults));
    r.add(make_cat("DPo6", tree_of({}, {}, {}, {}, {"DPo3"}, {}, {}, {}), "ord3", "ord3", any,
                   MLInfillType::ordinal, "encoding", true));
    r.add(make_cat("DPo3", tree_of({}, {}, {}, {}, {}, {}, {"1010"}, {}), "noise_flip", "DPod",
                   any, MLInfillType::ordinal, "identity", false, flip_defaults));

    // Sequential deltas: the delta chain replaces the source while a retain
    // normalization of the source supplements it; the delta output is itself
    // retain-normalized downstream for sign retention.
    auto delta = [&](const std::string& id, const std::string& fn, ParamMap defaults) {
        r.add(make_cat(id, tree_of({id}, {}, {}, {"retn", "NArw"}, {}, {}, {"retn"}, {}), fn, id,
                       num, MLInfillType::numeric, "", false, std::move(defaults)));
    };
    delta("dxdt", "dxdt", {{"periods", 1.0}, {"order", 1.0}});
    delta("d2dt", "dxdt", {{"periods", 1.0}, {"order", 2.0}});
    delta("d3dt", "dxdt", {{"periods", 1.0}, {"order", 3.0}});
    delta("dxd2", "dxd2", {{"periods", 1.0}, {"window", 2.0}});

    // Integer sets: redundant encodings suitable for each interpretation.
    // The parents chain is a frequency-sorted ordinal followed by min-max.
    r.add(make_cat("ntgr",
                   tree_of({"ntgr"}, {}, {}, {"retn", "pwr2", "ordl", "1010", "NArw"}, {}, {},
                           {"mnmx"}, {}),
                   "ord3", "ord3", NArowType::integer, MLInfillType::ordinal, "encoding", true));
    // Documented subsets of ntgr (the survey names them without defining):
    // ntg2 drops the binary group, ntg3 keeps only retn + ordinal.
    r.add(make_cat("ntg2",
                   tree_of({"ntg2"}, {}, {}, {"retn", "pwr2", "ordl", "NArw"}, {}, {}, {"mnmx"},
                           {}),
                   "ord3", "ord3", NArowType::integer, MLInfillType::ordinal, "encoding", true));
    r.add(make_cat("ntg3", tree_of({"retn"}, {}, {}, {"ordl", "NArw"}), "ord3", "ord3",
                   NArowType::integer, MLInfillType::ordinal, "encoding", true));

    // Retain normalization supplemented by standard deviation bins.
    r.add(make_cat("rtbn", tree_of({"rtbn"}, {}, {}, {"bins", "NArw"}), "retn", "retn", num,
                   MLInfillType::numeric, "norm", true));

    return r;
}

}  // namespace

const Registry& builtin_registry() {
    static const Registry registry = build_builtin_registry();
    return registry;
}

}  // namespace tabtree
