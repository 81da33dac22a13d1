#include "tabtree/bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "tabtree/pipeline.hpp"
#include "tabtree/rng.hpp"

namespace tabtree::bench {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

ColumnData number_column(std::string header, std::vector<double> values) {
    ColumnData c;
    c.header = std::move(header);
    c.cells.reserve(values.size());
    for (double v : values) c.cells.push_back(CellValue::number(v));
    return c;
}

}  // namespace

SyntheticData generate_synthetic(std::size_t rows, std::uint64_t seed) {
    if (rows < 100) throw std::runtime_error("generate_synthetic: need at least 100 rows");
    Rng rng(derive_seed(seed, {"synthetic"}));

    // Label-independent contamination stretches a feature's range far beyond
    // its informative bulk, the way physical sensor features behave; fixed
    // sigma range-scaled noise then destroys the bulk ordering.
    auto contaminate = [&rng](double z) {
        if (rng.uniform() < 0.03) return rng.uniform() * 70.0 - 35.0;
        return z;
    };

    std::vector<double> f1(rows), f2(rows), f3(rows), f4(rows), f5(rows), f6(rows), y(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        double z1 = rng.gaussian(0.0, 1.0);
        double z2 = rng.gaussian(0.0, 1.0);
        double z3 = rng.gaussian(0.0, 1.0);
        double z4 = rng.gaussian(0.0, 1.0);
        double z5 = rng.gaussian(0.0, 1.0);
        f1[i] = z1 * 1000.0;
        f2[i] = contaminate(z2) * 0.001;
        f3[i] = z3;
        f4[i] = contaminate(z4) * 200.0;
        f5[i] = z5 * 50.0 + 100.0;
        f6[i] = rng.uniform() * 10.0 - 5.0;

        // Quadratic driver on z1 keeps the boundary nonlinear for the bins
        // comparison; the strongest linear drivers sit on the contaminated
        // features. Intercept balances the classes.
        double logit = 1.6 * (z1 * z1 - 1.0) + 1.8 * z2 + 0.4 * z3 + 1.8 * z4 + 0.3 * z5 + 0.28;
        y[i] = rng.uniform() < sigmoid(logit) ? 1.0 : 0.0;
    }

    SyntheticData data;
    data.table.columns.push_back(number_column("f1", std::move(f1)));
    data.table.columns.push_back(number_column("f2", std::move(f2)));
    data.table.columns.push_back(number_column("f3", std::move(f3)));
    data.table.columns.push_back(number_column("f4", std::move(f4)));
    data.table.columns.push_back(number_column("f5", std::move(f5)));
    data.table.columns.push_back(number_column("f6", std::move(f6)));
    data.table.columns.push_back(number_column("target", std::move(y)));
    return data;
}

// ---------------------------------------------------------------------------
// Learners

namespace {

std::vector<double> rms_scales(const std::vector<std::vector<double>>& x) {
    std::size_t d = x.empty() ? 0 : x.front().size();
    std::vector<double> scale(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double sq = 0.0;
        for (const auto& row : x) sq += row[j] * row[j];
        double rms = std::sqrt(sq / static_cast<double>(x.size()));
        scale[j] = rms > 1e-12 ? 1.0 / rms : 0.0;
    }
    return scale;
}

std::vector<std::size_t> epoch_order(std::size_t n, Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = rng.uniform_int(i);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

}  // namespace

std::vector<double> train_logreg(const std::vector<std::vector<double>>& x,
                                 const std::vector<double>& y, int epochs, double lr, int batch,
                                 std::uint64_t seed) {
    if (x.empty() || x.size() != y.size()) {
        throw std::runtime_error("train_logreg: empty or mismatched training data");
    }
    std::size_t n = x.size();
    std::size_t d = x.front().size();
    std::vector<double> scale = rms_scales(x);
    std::vector<double> w(d, 0.0);
    double bias = 0.0;
    Rng rng(derive_seed(seed, {"logreg"}));

    std::size_t step = batch > 0 ? static_cast<std::size_t>(batch) : n;
    for (int e = 0; e < epochs; ++e) {
        std::vector<std::size_t> order =
            batch > 0 ? epoch_order(n, rng) : std::vector<std::size_t>();
        for (std::size_t start = 0; start < n; start += step) {
            std::size_t end = std::min(start + step, n);
            double gb = 0.0;
            std::vector<double> gw(d, 0.0);
            for (std::size_t k = start; k < end; ++k) {
                std::size_t i = batch > 0 ? order[k] : k;
                double z = bias;
                for (std::size_t j = 0; j < d; ++j) z += w[j] * x[i][j] * scale[j];
                double err = sigmoid(z) - y[i];
                gb += err;
                for (std::size_t j = 0; j < d; ++j) gw[j] += err * x[i][j] * scale[j];
            }
            double inv = 1.0 / static_cast<double>(end - start);
            bias -= lr * gb * inv;
            for (std::size_t j = 0; j < d; ++j) w[j] -= lr * gw[j] * inv;
            if (!std::isfinite(bias)) {
                throw std::runtime_error(
                    "train_logreg: loss became non-finite; check feature scaling");
            }
        }
    }

    std::vector<double> weights(d + 1, 0.0);
    weights[0] = bias;
    for (std::size_t j = 0; j < d; ++j) weights[j + 1] = w[j] * scale[j];
    return weights;
}

std::vector<double> train_linear_svc(const std::vector<std::vector<double>>& x,
                                     const std::vector<double>& y, int epochs, double lr,
                                     std::uint64_t seed) {
    if (x.empty() || x.size() != y.size()) {
        throw std::runtime_error("train_linear_svc: empty or mismatched training data");
    }
    std::size_t n = x.size();
    std::size_t d = x.front().size();
    std::vector<double> scale = rms_scales(x);
    std::vector<double> w(d, 0.0);
    double bias = 0.0;
    const double lambda = 1e-3;
    Rng rng(derive_seed(seed, {"svc"}));

    for (int e = 0; e < epochs; ++e) {
        std::vector<std::size_t> order = epoch_order(n, rng);
        const std::size_t step = 32;
        for (std::size_t start = 0; start < n; start += step) {
            std::size_t end = std::min(start + step, n);
            double gb = 0.0;
            std::vector<double> gw(d, 0.0);
            for (std::size_t k = start; k < end; ++k) {
                std::size_t i = order[k];
                double target = y[i] > 0.5 ? 1.0 : -1.0;
                double z = bias;
                for (std::size_t j = 0; j < d; ++j) z += w[j] * x[i][j] * scale[j];
                if (target * z < 1.0) {
                    gb -= target;
                    for (std::size_t j = 0; j < d; ++j) gw[j] -= target * x[i][j] * scale[j];
                }
            }
            double inv = 1.0 / static_cast<double>(end - start);
            bias -= lr * gb * inv;
            for (std::size_t j = 0; j < d; ++j) {
                w[j] -= lr * (gw[j] * inv + lambda * w[j]);
            }
            if (!std::isfinite(bias)) {
                throw std::runtime_error(
                    "train_linear_svc: loss became non-finite; check feature scaling");
            }
        }
    }

    std::vector<double> weights(d + 1, 0.0);
    weights[0] = bias;
    for (std::size_t j = 0; j < d; ++j) weights[j + 1] = w[j] * scale[j];
    return weights;
}

double decision_value(const std::vector<double>& weights, const std::vector<double>& row) {
    double z = weights.empty() ? 0.0 : weights[0];
    for (std::size_t j = 0; j + 1 < weights.size() && j < row.size(); ++j) {
        z += weights[j + 1] * row[j];
    }
    return z;
}

double roc_auc(const std::vector<double>& scores, const std::vector<double>& labels) {
    if (scores.size() != labels.size() || scores.empty()) {
        throw std::runtime_error("roc_auc: empty or mismatched inputs");
    }
    std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over ties, then the Mann-Whitney statistic.
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }

    double pos = 0.0;
    double rank_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (labels[k] > 0.5) {
            pos += 1.0;
            rank_sum += rank[k];
        }
    }
    double neg = static_cast<double>(n) - pos;
    if (pos == 0.0 || neg == 0.0) {
        throw std::runtime_error("roc_auc: both classes must be present");
    }
    return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

double accuracy_at_zero(const std::vector<double>& scores, const std::vector<double>& labels) {
    if (scores.size() != labels.size() || scores.empty()) {
        throw std::runtime_error("accuracy: empty or mismatched inputs");
    }
    std::size_t hit = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool pred = scores[i] > 0.0;
        bool truth = labels[i] > 0.5;
        if (pred == truth) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(scores.size());
}

// ---------------------------------------------------------------------------
// Scenario harness

const std::vector<std::string> kScenarios = {
    "raw", "zscore", "retn", "retn_bins", "noise_full", "noise_partial", "augment"};

namespace {

PipelineConfig scenario_config(const std::string& scenario, const SyntheticData& data,
                               std::uint64_t seed) {
    PipelineConfig cfg;
    cfg.labels_column = data.labels_column;
    cfg.master_seed = seed;
    cfg.shuffletrain = false;
    cfg.valpercent = 0.0;

    std::vector<std::string> features;
    for (const auto& col : data.table.columns) {
        if (col.header != data.labels_column) features.push_back(col.header);
    }

    if (scenario == "raw") {
        cfg.assigncat["excl"] = features;
    } else if (scenario == "zscore") {
        cfg.assigncat["nmbr"] = features;
    } else if (scenario == "retn") {
        cfg.assigncat["retn"] = features;
    } else if (scenario == "retn_bins") {
        cfg.assigncat["rtbn"] = features;
    } else if (scenario == "noise_full") {
        cfg.assigncat["DPrt"] = features;
        cfg.default_params["DPrt"] = {{"flip_prob", 1.0}, {"sigma", 0.03}};
    } else if (scenario == "noise_partial") {
        cfg.assigncat["DPrt"] = features;
        cfg.default_params["DPrt"] = {{"flip_prob", 0.03}, {"sigma", 0.03}};
    } else if (scenario == "augment") {
        cfg.assigncat["DPrt"] = features;
        cfg.default_params["DPrt"] = {{"flip_prob", 0.03}, {"sigma", 0.03}};
        cfg.noise_augment = 1;
    } else {
        throw std::runtime_error("bench: unknown scenario '" + scenario + "'");
    }
    // Labels stay numeric; retain normalization of a 0/1 label is identity.
    if (scenario == "raw") cfg.assigncat["retn"] = {data.labels_column};
    return cfg;
}

std::vector<std::vector<double>> table_matrix(const Table& t) {
    std::size_t rows = t.row_count();
    std::vector<std::vector<double>> m(rows);
    for (const auto& col : t.columns) {
        for (std::size_t r = 0; r < rows; ++r) {
            auto v = col.cells[r].as_number();
            m[r].push_back(v ? *v : 0.0);
        }
    }
    return m;
}

std::vector<double> label_vector(const Table& t) {
    if (t.columns.empty()) throw std::runtime_error("bench: missing labels output");
    std::vector<double> y;
    y.reserve(t.row_count());
    for (const auto& cell : t.columns.front().cells) {
        auto v = cell.as_number();
        y.push_back(v ? *v : 0.0);
    }
    return y;
}

Table head_rows(const Table& t, std::size_t count) {
    Table out;
    for (const auto& col : t.columns) {
        ColumnData c;
        c.header = col.header;
        c.role = col.role;
        c.cells.assign(col.cells.begin(), col.cells.begin() + count);
        out.columns.push_back(std::move(c));
    }
    return out;
}

Table tail_rows(const Table& t, std::size_t count) {
    Table out;
    for (const auto& col : t.columns) {
        ColumnData c;
        c.header = col.header;
        c.role = col.role;
        c.cells.assign(col.cells.end() - count, col.cells.end());
        out.columns.push_back(std::move(c));
    }
    return out;
}

double stddev_of(const std::vector<double>& v, double mean) {
    if (v.empty()) return 0.0;
    double sq = 0.0;
    for (double x : v) sq += (x - mean) * (x - mean);
    return std::sqrt(sq / static_cast<double>(v.size()));
}

}  // namespace

double run_single(const std::string& scenario, const SyntheticData& data, double fraction,
                  const ScenarioOptions& options, std::uint64_t rep_seed) {
    std::size_t n = data.table.row_count();
    std::size_t n_val = static_cast<std::size_t>(options.validation_share * n);
    std::size_t pool = n - n_val;
    std::size_t n_train = std::max<std::size_t>(8, static_cast<std::size_t>(fraction * pool));
    n_train = std::min(n_train, pool);

    Table train = head_rows(data.table, n_train);
    Table validation = tail_rows(data.table, n_val);

    PipelineConfig cfg = scenario_config(scenario, data, rep_seed);
    FitResult fitted = fit(train, cfg);
    ApplyResult val_out = apply(fitted.store, validation, false, 0);

    auto x_train = table_matrix(fitted.train);
    auto y_train = label_vector(fitted.labels);
    auto x_val = table_matrix(val_out.test);
    auto y_val = label_vector(val_out.labels);

    std::vector<double> weights;
    if (options.learner == Learner::logreg) {
        weights = train_logreg(x_train, y_train, options.epochs, options.lr, options.batch,
                               rep_seed);
    } else {
        weights = train_linear_svc(x_train, y_train, options.epochs, options.lr, rep_seed);
    }

    std::vector<double> scores;
    scores.reserve(x_val.size());
    for (const auto& row : x_val) scores.push_back(decision_value(weights, row));

    return options.learner == Learner::logreg ? roc_auc(scores, y_val)
                                              : accuracy_at_zero(scores, y_val);
}

std::vector<ScenarioResult> run_scenarios(const ScenarioOptions& options) {
    std::vector<ScenarioResult> results;
    for (double fraction : options.fractions) {
        std::map<std::string, ScenarioResult> by_name;
        for (int rep = 0; rep < options.repetitions; ++rep) {
            std::uint64_t rep_seed =
                derive_seed(options.seed, {"rep", std::to_string(rep)});
            SyntheticData data = generate_synthetic(options.rows, rep_seed);
            for (const auto& scenario : kScenarios) {
                double metric = run_single(scenario, data, fraction, options, rep_seed);
                by_name[scenario].per_rep.push_back(metric);
            }
        }
        double raw_mean = 0.0;
        for (const auto& scenario : kScenarios) {
            ScenarioResult& r = by_name[scenario];
            r.scenario = scenario;
            r.fraction = fraction;
            r.repetitions = options.repetitions;
            double sum = 0.0;
            for (double v : r.per_rep) sum += v;
            r.metric_mean = sum / static_cast<double>(r.per_rep.size());
            r.metric_stddev = stddev_of(r.per_rep, r.metric_mean);
            if (scenario == "raw") raw_mean = r.metric_mean;
            r.delta_vs_raw = r.metric_mean - raw_mean;
            results.push_back(r);
        }
    }
    return results;
}

std::string results_csv(const std::vector<ScenarioResult>& results) {
    std::string out = "scenario,fraction,repetitions,metric_mean,metric_stddev,delta_vs_raw\n";
    for (const auto& r : results) {
        out += r.scenario + "," + format_number(r.fraction) + "," + std::to_string(r.repetitions) +
               "," + format_number(r.metric_mean) + "," + format_number(r.metric_stddev) + "," +
               format_number(r.delta_vs_raw) + "\n";
    }
    return out;
}

std::string results_text(const std::vector<ScenarioResult>& results) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%-14s %-10s %-6s %-10s %-10s %-10s\n", "scenario",
                  "fraction", "reps", "mean", "stddev", "delta_raw");
    out += buf;
    for (const auto& r : results) {
        std::snprintf(buf, sizeof(buf), "%-14s %-10.4g %-6d %-10.4f %-10.4f %-+10.4f\n",
                      r.scenario.c_str(), r.fraction, r.repetitions, r.metric_mean,
                      r.metric_stddev, r.delta_vs_raw);
        out += buf;
    }
    return out;
}

}  // namespace tabtree::bench
