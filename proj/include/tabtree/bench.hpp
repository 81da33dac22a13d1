#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tabtree/cell.hpp"

namespace tabtree::bench {

// Mixed-scale numeric features with a nonlinear decision boundary (so
// binning helps a linear model), one heavy-tailed feature (so full-range
// noise injection hurts), label noise, and ~50% class balance. Deterministic
// per seed.
struct SyntheticData {
    Table table;
    std::string labels_column = "target";
};

SyntheticData generate_synthetic(std::size_t rows, std::uint64_t seed);

// Logistic regression by seeded gradient descent with per-feature RMS
// preconditioning (keeps raw-scale features trainable). batch = 0 runs full
// batch; a positive batch size runs seeded minibatch SGD, so more rows mean
// more updates per epoch. Returns [bias, w...].
std::vector<double> train_logreg(const std::vector<std::vector<double>>& x,
                                 const std::vector<double>& y, int epochs, double lr,
                                 int batch = 0, std::uint64_t seed = 0);

// Linear support vector classifier, hinge loss with L2, same preconditioning.
std::vector<double> train_linear_svc(const std::vector<std::vector<double>>& x,
                                     const std::vector<double>& y, int epochs = 40,
                                     double lr = 0.1, std::uint64_t seed = 0);

double decision_value(const std::vector<double>& weights, const std::vector<double>& row);

// Pair-counting probability with tie correction (Mann-Whitney form).
double roc_auc(const std::vector<double>& scores, const std::vector<double>& labels);

double accuracy_at_zero(const std::vector<double>& scores, const std::vector<double>& labels);

enum class Learner { logreg, svc };

struct ScenarioOptions {
    std::size_t rows = 10000;
    std::vector<double> fractions = {1.0, 0.05, 0.0025};
    int repetitions = 5;
    std::uint64_t seed = 42;
    Learner learner = Learner::logreg;  // logreg reports AUC, svc accuracy
    int epochs = 30;
    double lr = 0.1;
    int batch = 32;
    double validation_share = 0.3;
};

struct ScenarioResult {
    std::string scenario;
    double fraction = 1.0;
    int repetitions = 0;
    double metric_mean = 0.0;
    double metric_stddev = 0.0;
    double delta_vs_raw = 0.0;
    std::vector<double> per_rep;
};

// The preprocessing scenarios of the survey experiments: raw passthrough,
// z-score, retain, retain with stdev bins, retain with full / partial noise,
// and partial-noise augmentation. Every scenario runs end to end through the
// real pipeline fit/apply path.
extern const std::vector<std::string> kScenarios;

std::vector<ScenarioResult> run_scenarios(const ScenarioOptions& options);

std::string results_csv(const std::vector<ScenarioResult>& results);
std::string results_text(const std::vector<ScenarioResult>& results);

// One scenario at one fraction; exposed for focused checks.
double run_single(const std::string& scenario, const SyntheticData& data, double fraction,
                  const ScenarioOptions& options, std::uint64_t rep_seed);

}  // namespace tabtree::bench
