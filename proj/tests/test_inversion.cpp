#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "tabtree/inversion.hpp"
#include "tabtree/pipeline.hpp"

using namespace tabtree;
using namespace tabtree::testing;

namespace {

PipelineStore fit_single(const ColumnData& col, const std::string& root,
                         Table* train_out = nullptr) {
    Table t;
    t.columns.push_back(col);
    PipelineConfig cfg;
    cfg.shuffletrain = false;
    cfg.master_seed = 11;
    cfg.assigncat[root] = {col.header};
    FitResult r = fit(t, cfg);
    if (train_out) *train_out = r.train;
    return r.store;
}

}  // namespace

TEST_CASE("retn with bins picks the one-step full-information path") {
    Table out;
    PipelineStore store = fit_single(random_numeric("x", 60, 1, 4.0, 2.0), "rtbn", &out);
    auto paths = build_inversion_paths(store, "x");
    REQUIRE(!paths.empty());
    CHECK(paths.front().length == 1);
    CHECK(paths.front().full_information);
    CHECK(paths.front().basis_chain == std::vector<std::string>{"x_retn"});

    InvertResult inv = invert(store, out, InvertTarget::test);
    REQUIRE(inv.recovered_list == std::vector<std::string>{"x"});
    CHECK(inv.report.front().full_information);
}

TEST_CASE("ntgr prefers retn over the deeper and later chains") {
    Table out;
    PipelineStore store = fit_single(num_col("x", {2, 1, 2, 3, 2, 1, 4, 2}), "ntgr", &out);
    auto paths = build_inversion_paths(store, "x");
    REQUIRE(paths.size() >= 3);
    CHECK(paths.front().basis_chain == std::vector<std::string>{"x_retn"});

    InvertResult inv = invert(store, out, InvertTarget::test);
    auto nums = numbers_of(inv.recovered.columns.front());
    std::vector<double> expect{2, 1, 2, 3, 2, 1, 4, 2};
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(std::fabs(nums[i] - expect[i]) < 1e-9);
    }
}

TEST_CASE("full-information builtins invert to 1e-9 or exactly") {
    for (const char* root : {"nmbr", "mnmx", "mean", "retn"}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            ColumnData col = random_numeric("x", 50, seed, 2.5, -1.0);
            Table out;
            PipelineStore store = fit_single(col, root, &out);
            InvertResult inv = invert(store, out, InvertTarget::test);
            for (std::size_t i = 0; i < col.size(); ++i) {
                CHECK(std::fabs(inv.recovered.columns[0].cells[i].number_value() -
                                col.cells[i].number_value()) < 1e-9);
            }
        }
    }
    for (const char* root : {"ordl", "ord3", "onht", "1010"}) {
        ColumnData col = random_levels("x", 50, 5, 3);
        Table out;
        PipelineStore store = fit_single(col, root, &out);
        InvertResult inv = invert(store, out, InvertTarget::test);
        for (std::size_t i = 0; i < col.size(); ++i) {
            CHECK(inv.recovered.columns[0].cells[i].text_value() == col.cells[i].text_value());
        }
    }
}

TEST_CASE("noise chains invert approximately via the identity step") {
    ColumnData col = random_numeric("x", 40, 9, 3.0, 0.5);
    Table fit_out;
    PipelineStore store = fit_single(col, "DPrt", &fit_out);

    // Apply without noise, then walk back through identity + retn.
    Table test;
    test.columns.push_back(col);
    ApplyResult applied = apply(store, test, false, 0);
    InvertResult inv = invert(store, applied.test, InvertTarget::test);
    CHECK(!inv.report.front().full_information);
    for (std::size_t i = 0; i < col.size(); ++i) {
        CHECK(std::fabs(inv.recovered.columns[0].cells[i].number_value() -
                        col.cells[i].number_value()) < 1e-9);
    }
}

TEST_CASE("excl recovers through a zero-length path") {
    Table out;
    PipelineStore store = fit_single(random_numeric("x", 20, 5), "excl", &out);
    auto paths = build_inversion_paths(store, "x");
    REQUIRE(!paths.empty());
    CHECK(paths.front().length == 0);
    InvertResult inv = invert(store, out, InvertTarget::test);
    CHECK(inv.recovered_list == std::vector<std::string>{"x"});
}

TEST_CASE("partial multi-column groups name the absent headers") {
    ColumnData col = random_levels("x", 30, 5, 6);
    Table out;
    PipelineStore store = fit_single(col, "1010", &out);
    Table partial;
    partial.columns.push_back(*out.find("x_1010_0"));
    partial.columns.push_back(*out.find("x_1010_1"));
    CHECK_THROWS_WITH_AS(static_cast<void>(invert(store, partial, InvertTarget::test)),
                         doctest::Contains("x_1010_2"), std::runtime_error);
}

TEST_CASE("bins-only sources report the blocking category") {
    ColumnData col = random_numeric("x", 30, 7, 2.0, 5.0);
    Table out;
    PipelineStore store = fit_single(col, "bins", &out);
    CHECK_THROWS_WITH_AS(static_cast<void>(build_inversion_paths(store, "x")),
                         doctest::Contains("bins"), std::runtime_error);
}

TEST_CASE("label predictions invert to original level strings") {
    Table t;
    t.columns.push_back(random_numeric("f", 50, 8));
    t.columns.push_back(random_levels("y", 50, 3, 9));
    PipelineConfig cfg;
    cfg.shuffletrain = false;
    cfg.labels_column = "y";
    cfg.assigncat["1010"] = {"y"};
    FitResult fitted = fit(t, cfg);

    // Model predictions arrive as the encoded label columns.
    InvertResult inv = invert(fitted.store, fitted.labels, InvertTarget::labels);
    REQUIRE(inv.recovered_list == std::vector<std::string>{"y"});
    for (std::size_t i = 0; i < t.columns[1].size(); ++i) {
        CHECK(inv.recovered.columns[0].cells[i].text_value() ==
              t.columns[1].cells[i].text_value());
    }
}
