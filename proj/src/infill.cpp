#include "tabtree/infill.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace tabtree {

bool narow_cell_valid(const CellValue& cell, NArowType narowtype) {
    if (narowtype == NArowType::any) return !cell.is_missing();
    auto num = cell.as_number();
    if (!num) return false;
    switch (narowtype) {
        case NArowType::numeric: return true;
        case NArowType::nonnegative_numeric: return *num >= 0.0;
        case NArowType::nonzero_numeric: return *num != 0.0;
        case NArowType::positive_numeric: return *num > 0.0;
        case NArowType::integer: return is_integral(*num);
        case NArowType::any: return true;
    }
    return false;
}

NArowMask compute_narw_mask(const ColumnData& column, NArowType narowtype) {
    NArowMask mask;
    mask.header = column.header;
    mask.flags.reserve(column.size());
    for (const auto& cell : column.cells) {
        mask.flags.push_back(!narow_cell_valid(cell, narowtype));
    }
    return mask;
}

const char* infill_strategy_name(InfillStrategy s) {
    switch (s) {
        case InfillStrategy::stdrd: return "stdrd";
        case InfillStrategy::zero: return "zero";
        case InfillStrategy::one: return "one";
        case InfillStrategy::adj: return "adj";
        case InfillStrategy::mean: return "mean";
        case InfillStrategy::median: return "median";
        case InfillStrategy::mode: return "mode";
        case InfillStrategy::negzero: return "negzero";
        case InfillStrategy::lc: return "lc";
        case InfillStrategy::nan: return "nan";
        case InfillStrategy::ml: return "ml";
    }
    return "?";
}

std::optional<InfillStrategy> infill_strategy_from_name(const std::string& name) {
    for (InfillStrategy s : {InfillStrategy::stdrd, InfillStrategy::zero, InfillStrategy::one,
                             InfillStrategy::adj, InfillStrategy::mean, InfillStrategy::median,
                             InfillStrategy::mode, InfillStrategy::negzero, InfillStrategy::lc,
                             InfillStrategy::nan, InfillStrategy::ml}) {
        if (name == infill_strategy_name(s)) return s;
    }
    // Long names from the assigninfill convention.
    std::map<std::string, InfillStrategy> aliases = {
        {"stdrdinfill", InfillStrategy::stdrd}, {"zeroinfill", InfillStrategy::zero},
        {"oneinfill", InfillStrategy::one},     {"adjinfill", InfillStrategy::adj},
        {"meaninfill", InfillStrategy::mean},   {"medianinfill", InfillStrategy::median},
        {"modeinfill", InfillStrategy::mode},   {"negzeroinfill", InfillStrategy::negzero},
        {"lcinfill", InfillStrategy::lc},       {"naninfill", InfillStrategy::nan},
        {"MLinfill", InfillStrategy::ml},       {"mlinfill", InfillStrategy::ml},
    };
    auto it = aliases.find(name);
    if (it != aliases.end()) return it->second;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Decision tree ensemble

double DecisionTree::predict(const std::vector<double>& row) const {
    int at = 0;
    while (nodes[at].feature >= 0) {
        const TreeNode& n = nodes[at];
        double v = n.feature < static_cast<int>(row.size()) ? row[n.feature] : 0.0;
        at = v < n.threshold ? n.left : n.right;
    }
    return nodes[at].value;
}

double Forest::predict(const std::vector<double>& row) const {
    if (trees.empty()) return 0.0;
    if (!classification) {
        double sum = 0.0;
        for (const auto& t : trees) sum += t.predict(row);
        return sum / static_cast<double>(trees.size());
    }
    std::map<double, int> votes;
    for (const auto& t : trees) ++votes[t.predict(row)];
    double best = trees.front().predict(row);
    int best_count = -1;
    for (const auto& [cls, count] : votes) {
        if (count > best_count) {
            best = cls;
            best_count = count;
        }
    }
    return best;
}

namespace {

struct TreeBuilder {
    const std::vector<std::vector<double>>& rows;
    const std::vector<double>& y;
    bool classification;
    const ForestConfig& cfg;
    Rng& rng;
    int feature_count;
    std::vector<TreeNode> nodes;

    double leaf_value(const std::vector<int>& idx) const {
        if (!classification) {
            double sum = 0.0;
            for (int i : idx) sum += y[i];
            return sum / static_cast<double>(idx.size());
        }
        std::map<double, int> counts;
        for (int i : idx) ++counts[y[i]];
        double best = y[idx.front()];
        int best_count = -1;
        for (const auto& [cls, count] : counts) {
            if (count > best_count) {
                best = cls;
                best_count = count;
            }
        }
        return best;
    }

    double impurity(const std::vector<int>& idx) const {
        if (idx.empty()) return 0.0;
        if (!classification) {
            double sum = 0.0;
            for (int i : idx) sum += y[i];
            double mu = sum / static_cast<double>(idx.size());
            double sq = 0.0;
            for (int i : idx) sq += (y[i] - mu) * (y[i] - mu);
            return sq;
        }
        std::map<double, int> counts;
        for (int i : idx) ++counts[y[i]];
        double n = static_cast<double>(idx.size());
        double gini = 1.0;
        for (const auto& [cls, count] : counts) {
            double p = count / n;
            gini -= p * p;
        }
        return gini * n;
    }

    // Best threshold on one feature; returns improvement over parent
    // impurity, negative when no valid split exists.
    double best_split_on(const std::vector<int>& idx, int f, double parent, double* threshold) const {
        std::vector<std::pair<double, int>> vals;
        vals.reserve(idx.size());
        for (int i : idx) vals.emplace_back(rows[i][f], i);
        std::sort(vals.begin(), vals.end());
        if (vals.front().first == vals.back().first) return -1.0;

        double best_gain = -1.0;
        std::vector<int> left;
        left.reserve(idx.size());
        std::vector<int> right;
        for (const auto& [v, i] : vals) right.push_back(i);

        std::size_t pos = 0;
        while (pos < vals.size()) {
            std::size_t run = pos;
            while (run < vals.size() && vals[run].first == vals[pos].first) {
                left.push_back(vals[run].second);
                ++run;
            }
            right.erase(right.begin(), right.begin() + (run - pos));
            pos = run;
            if (right.empty()) break;
            if (static_cast<int>(left.size()) < cfg.min_leaf ||
                static_cast<int>(right.size()) < cfg.min_leaf) {
                continue;
            }
            double gain = parent - impurity(left) - impurity(right);
            if (gain > best_gain) {
                best_gain = gain;
                *threshold = 0.5 * (vals[pos - 1].first + vals[pos].first);
            }
        }
        return best_gain;
    }

    int build(const std::vector<int>& idx, int depth) {
        int node_id = static_cast<int>(nodes.size());
        nodes.push_back(TreeNode{});
        nodes[node_id].value = leaf_value(idx);

        double parent = impurity(idx);
        if (depth >= cfg.max_depth || static_cast<int>(idx.size()) < 2 * cfg.min_leaf ||
            parent <= 0.0) {
            return node_id;
        }

        // Random candidate subset of ~sqrt(d) features per split; when none
        // of them yields a usable split, the remaining features are tried so
        // a lone informative feature is never lost to bagging.
        std::vector<int> order(feature_count);
        std::iota(order.begin(), order.end(), 0);
        for (int i = feature_count - 1; i > 0; --i) {
            int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[i], order[j]);
        }
        int take = std::max(1, static_cast<int>(std::ceil(std::sqrt(feature_count))));

        int best_feature = -1;
        double best_gain = 0.0;
        double best_threshold = 0.0;
        auto try_feature = [&](int f) {
            double threshold = 0.0;
            double gain = best_split_on(idx, f, parent, &threshold);
            if (gain > best_gain + 1e-12) {
                best_gain = gain;
                best_feature = f;
                best_threshold = threshold;
            }
        };
        for (int k = 0; k < take && k < feature_count; ++k) try_feature(order[k]);
        if (best_feature < 0) {
            for (int k = take; k < feature_count; ++k) try_feature(order[k]);
        }
        if (best_feature < 0) return node_id;

        std::vector<int> left;
        std::vector<int> right;
        for (int i : idx) {
            (rows[i][best_feature] < best_threshold ? left : right).push_back(i);
        }
        if (left.empty() || right.empty()) return node_id;

        nodes[node_id].feature = best_feature;
        nodes[node_id].threshold = best_threshold;
        nodes[node_id].left = build(left, depth + 1);
        nodes[node_id].right = build(right, depth + 1);
        return node_id;
    }
};

}  // namespace

Forest train_forest(const std::vector<std::vector<double>>& rows, const std::vector<double>& y,
                    bool classification, const ForestConfig& config, Rng& rng) {
    if (rows.empty() || rows.size() != y.size()) {
        throw std::runtime_error("train_forest: empty or mismatched training data");
    }
    Forest forest;
    forest.classification = classification;
    if (classification) {
        std::map<double, int> seen;
        for (double v : y) seen[v] = 1;
        for (const auto& [cls, one] : seen) forest.classes.push_back(cls);
    }
    int n = static_cast<int>(rows.size());
    int d = rows.front().empty() ? 0 : static_cast<int>(rows.front().size());
    if (d == 0) {
        // No features at all: a single constant leaf.
        DecisionTree t;
        TreeBuilder builder{rows, y, classification, config, rng, 0, {}};
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, builder.leaf_value(idx)});
        forest.trees.push_back(std::move(t));
        return forest;
    }

    for (int t = 0; t < config.tree_count; ++t) {
        std::vector<int> sample;
        sample.reserve(n);
        for (int i = 0; i < n; ++i) {
            sample.push_back(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n))));
        }
        TreeBuilder builder{rows, y, classification, config, rng, d, {}};
        builder.build(sample, 0);
        DecisionTree tree;
        tree.nodes = std::move(builder.nodes);
        forest.trees.push_back(std::move(tree));
    }
    return forest;
}

// ---------------------------------------------------------------------------
// Simple fill strategies

namespace {

std::vector<double> unflagged_numbers(const ColumnData& column, const std::vector<bool>& mask) {
    std::vector<double> vals;
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (i < mask.size() && mask[i]) continue;
        auto v = column.cells[i].as_number();
        if (v) vals.push_back(*v);
    }
    return vals;
}

// Most frequent value; ties break toward the smallest. flip=true gives the
// least frequent instead.
double extreme_frequency_value(const std::vector<double>& vals, bool least) {
    std::map<double, int> counts;
    for (double v : vals) ++counts[v];
    double best = vals.front();
    int best_count = least ? INT32_MAX : -1;
    for (const auto& [v, count] : counts) {
        bool better = least ? count < best_count : count > best_count;
        if (better) {
            best = v;
            best_count = count;
        }
    }
    return best;
}

}  // namespace

ColumnFillBasis fit_fill(InfillStrategy strategy, const ColumnData& column,
                         const std::vector<bool>& mask, std::vector<std::string>* warnings) {
    ColumnFillBasis plan;
    plan.strategy = strategy;
    switch (strategy) {
        case InfillStrategy::zero:
            plan.fill_numbers = {0.0};
            return plan;
        case InfillStrategy::one:
            plan.fill_numbers = {1.0};
            return plan;
        case InfillStrategy::negzero:
            plan.fill_numbers = {-0.0};
            return plan;
        case InfillStrategy::nan:
            return plan;
        case InfillStrategy::adj: {
            bool any_unflagged = false;
            for (std::size_t i = 0; i < column.size(); ++i) {
                if (i >= mask.size() || !mask[i]) {
                    any_unflagged = true;
                    break;
                }
            }
            if (any_unflagged) return plan;
            if (warnings) {
                warnings->push_back("infill: column '" + column.header +
                                    "' is fully flagged; adj falls back to zero");
            }
            plan.strategy = InfillStrategy::zero;
            plan.fill_numbers = {0.0};
            return plan;
        }
        default:
            break;
    }

    std::vector<double> vals = unflagged_numbers(column, mask);
    if (vals.empty()) {
        if (warnings) {
            warnings->push_back("infill: column '" + column.header +
                                "' has no unflagged entries for strategy " +
                                infill_strategy_name(strategy) + "; falling back to zero");
        }
        plan.strategy = InfillStrategy::zero;
        plan.fill_numbers = {0.0};
        return plan;
    }

    switch (strategy) {
        case InfillStrategy::stdrd:
        case InfillStrategy::mean:
        case InfillStrategy::ml: {
            // ml keeps a mean fallback for rows the model cannot cover.
            double sum = 0.0;
            for (double v : vals) sum += v;
            plan.fill_numbers = {sum / static_cast<double>(vals.size())};
            break;
        }
        case InfillStrategy::median: {
            std::sort(vals.begin(), vals.end());
            std::size_t n = vals.size();
            plan.fill_numbers = {n % 2 == 1 ? vals[n / 2]
                                            : 0.5 * (vals[n / 2 - 1] + vals[n / 2])};
            break;
        }
        case InfillStrategy::mode:
            plan.fill_numbers = {extreme_frequency_value(vals, false)};
            break;
        case InfillStrategy::lc:
            plan.fill_numbers = {extreme_frequency_value(vals, true)};
            break;
        default:
            break;
    }
    return plan;
}

void apply_fill(ColumnData& column, const std::vector<bool>& mask, const ColumnFillBasis& plan) {
    std::size_t n = column.size();
    auto flagged = [&](std::size_t i) { return i < mask.size() && mask[i]; };

    switch (plan.strategy) {
        case InfillStrategy::nan:
            for (std::size_t i = 0; i < n; ++i) {
                if (flagged(i)) column.cells[i] = CellValue::missing();
            }
            return;
        case InfillStrategy::adj: {
            // Forward pass copies the nearest prior valid entry; the backward
            // pass covers leading flagged rows from the nearest following one.
            std::vector<bool> filled(n, false);
            std::optional<CellValue> carry;
            for (std::size_t i = 0; i < n; ++i) {
                if (!flagged(i)) {
                    carry = column.cells[i];
                } else if (carry) {
                    column.cells[i] = *carry;
                    filled[i] = true;
                }
            }
            carry.reset();
            for (std::size_t i = n; i-- > 0;) {
                if (!flagged(i)) {
                    carry = column.cells[i];
                } else if (!filled[i] && carry) {
                    column.cells[i] = *carry;
                }
            }
            // An all-flagged column stays untouched here; the caller's
            // zero fallback from fit_fill handles that case.
            return;
        }
        default:
            break;
    }

    if (plan.fill_numbers.empty()) return;
    double fill = plan.fill_numbers.front();
    for (std::size_t i = 0; i < n; ++i) {
        if (flagged(i)) column.cells[i] = CellValue::number(fill);
    }
}

}  // namespace tabtree
