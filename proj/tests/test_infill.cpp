#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "tabtree/infill.hpp"

using namespace tabtree;
using namespace tabtree::testing;

TEST_CASE("narow masks per type") {
    ColumnData mixed;
    mixed.header = "x";
    mixed.cells = {CellValue::number(1), CellValue::text("x"), CellValue::number(3)};
    CHECK(compute_narw_mask(mixed, NArowType::numeric).flags ==
          std::vector<bool>{false, true, false});

    CHECK(compute_narw_mask(num_col("x", {0, 2}), NArowType::nonzero_numeric).flags ==
          std::vector<bool>{true, false});
    CHECK(compute_narw_mask(num_col("x", {2.0, 2.5}), NArowType::integer).flags ==
          std::vector<bool>{false, true});
    CHECK(compute_narw_mask(num_col("x", {-1, 0, 1}), NArowType::positive_numeric).flags ==
          std::vector<bool>{true, true, false});
    CHECK(compute_narw_mask(num_col("x", {-1, 0, 1}), NArowType::nonnegative_numeric).flags ==
          std::vector<bool>{true, false, false});

    ColumnData with_missing = num_col("x", {1});
    with_missing.cells.push_back(CellValue::missing());
    with_missing.cells.push_back(CellValue::text("t"));
    CHECK(compute_narw_mask(with_missing, NArowType::any).flags ==
          std::vector<bool>{false, true, false});
    // Text that parses as a number is valid numeric input.
    ColumnData numeric_text;
    numeric_text.header = "x";
    numeric_text.cells = {CellValue::text("1.5"), CellValue::text("nope")};
    CHECK(compute_narw_mask(numeric_text, NArowType::numeric).flags ==
          std::vector<bool>{false, true});
}

TEST_CASE("adjacent infill copies the nearest prior valid entry") {
    ColumnData col = num_col("x", {1, 0, 3});
    std::vector<bool> mask{false, true, false};
    ColumnFillBasis plan = fit_fill(InfillStrategy::adj, col, mask, nullptr);
    apply_fill(col, mask, plan);
    CHECK(numbers_of(col) == std::vector<double>{1, 1, 3});

    // Leading flagged rows use the nearest following valid entry.
    ColumnData lead = num_col("x", {0, 2});
    std::vector<bool> lead_mask{true, false};
    apply_fill(lead, lead_mask, plan);
    CHECK(numbers_of(lead) == std::vector<double>{2, 2});
}

TEST_CASE("constant strategies fill exactly") {
    ColumnData col = num_col("x", {5, 5, 5});
    std::vector<bool> mask{true, false, true};

    ColumnData zero = col;
    apply_fill(zero, mask, fit_fill(InfillStrategy::zero, zero, mask, nullptr));
    CHECK(numbers_of(zero) == std::vector<double>{0, 5, 0});

    ColumnData one = col;
    apply_fill(one, mask, fit_fill(InfillStrategy::one, one, mask, nullptr));
    CHECK(numbers_of(one) == std::vector<double>{1, 5, 1});

    ColumnData negzero = col;
    apply_fill(negzero, mask, fit_fill(InfillStrategy::negzero, negzero, mask, nullptr));
    CHECK(std::signbit(negzero.cells[0].number_value()));
    CHECK(negzero.cells[0].number_value() == 0.0);
}

TEST_CASE("statistic strategies derive from unflagged train entries only") {
    ColumnData col = num_col("x", {1, 2, 2, 9, 100});
    std::vector<bool> mask{false, false, false, false, true};

    ColumnFillBasis mean_plan = fit_fill(InfillStrategy::mean, col, mask, nullptr);
    CHECK(mean_plan.fill_numbers[0] == doctest::Approx(3.5));  // mean of 1,2,2,9

    ColumnFillBasis median_plan = fit_fill(InfillStrategy::median, col, mask, nullptr);
    CHECK(median_plan.fill_numbers[0] == doctest::Approx(2.0));

    ColumnFillBasis mode_plan = fit_fill(InfillStrategy::mode, col, mask, nullptr);
    CHECK(mode_plan.fill_numbers[0] == 2.0);

    ColumnFillBasis lc_plan = fit_fill(InfillStrategy::lc, col, mask, nullptr);
    CHECK(lc_plan.fill_numbers[0] == 1.0);  // ties break toward the smallest
}

TEST_CASE("nan strategy re-marks flagged rows missing") {
    ColumnData col = num_col("x", {1, 2, 3});
    std::vector<bool> mask{false, true, false};
    apply_fill(col, mask, fit_fill(InfillStrategy::nan, col, mask, nullptr));
    CHECK(!col.cells[0].is_missing());
    CHECK(col.cells[1].is_missing());
}

TEST_CASE("fully flagged columns fall back to zero with a warning") {
    ColumnData col = num_col("x", {1, 2});
    std::vector<bool> mask{true, true};
    std::vector<std::string> warnings;
    ColumnFillBasis plan = fit_fill(InfillStrategy::mean, col, mask, &warnings);
    CHECK(plan.strategy == InfillStrategy::zero);
    CHECK(warnings.size() == 1);

    warnings.clear();
    ColumnFillBasis adj_plan = fit_fill(InfillStrategy::adj, col, mask, &warnings);
    CHECK(adj_plan.strategy == InfillStrategy::zero);
    CHECK(warnings.size() == 1);
}

TEST_CASE("regression forest recovers a duplicated feature exactly") {
    // Target equals the single feature, few distinct values, deep enough
    // trees to isolate each: every prediction collapses to the true value.
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    Rng rng(404);
    for (int i = 0; i < 400; ++i) {
        double v = static_cast<double>(rng.uniform_int(10));
        x.push_back({v});
        y.push_back(v);
    }
    ForestConfig cfg;
    Rng train_rng(7);
    Forest forest = train_forest(x, y, false, cfg, train_rng);
    for (int v = 0; v < 10; ++v) {
        CHECK(forest.predict({static_cast<double>(v)}) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("classification forest separates clear classes") {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        double a = rng.gaussian(0.0, 1.0);
        double b = rng.gaussian(0.0, 1.0);
        x.push_back({a, b});
        y.push_back(a > 0.0 ? 1.0 : 0.0);
    }
    ForestConfig cfg;
    Rng train_rng(13);
    Forest forest = train_forest(x, y, true, cfg, train_rng);
    CHECK(forest.predict({2.0, 0.0}) == 1.0);
    CHECK(forest.predict({-2.0, 0.0}) == 0.0);
}

TEST_CASE("forest predictions beat mean infill on a correlated target") {
    double forest_mae = 0.0;
    double mean_mae = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        std::vector<std::vector<double>> x_train, x_test;
        std::vector<double> y_train, y_test;
        for (int i = 0; i < 300; ++i) {
            double v = rng.gaussian(0.0, 1.0);
            x_train.push_back({v});
            y_train.push_back(2.0 * v + 1.0);
        }
        for (int i = 0; i < 60; ++i) {
            double v = rng.gaussian(0.0, 1.0);
            x_test.push_back({v});
            y_test.push_back(2.0 * v + 1.0);
        }
        ForestConfig cfg;
        Rng train_rng(seed + 100);
        Forest forest = train_forest(x_train, y_train, false, cfg, train_rng);
        double mean = oracle_mean(y_train);
        for (std::size_t i = 0; i < x_test.size(); ++i) {
            forest_mae += std::fabs(forest.predict(x_test[i]) - y_test[i]);
            mean_mae += std::fabs(mean - y_test[i]);
        }
    }
    CHECK(forest_mae < 0.5 * mean_mae);
}
