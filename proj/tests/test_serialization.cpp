#include "doctest.h"
#include "helpers.hpp"
#include "tabtree/pipeline.hpp"
#include "tabtree/store.hpp"

using namespace tabtree;
using namespace tabtree::testing;

namespace {

// A fitted store exercising every basis kind: norms, categoric groups,
// bins, noise, deltas, markers, passthrough, plus ML infill models.
PipelineStore fitted_store() {
    Table t;
    t.columns.push_back(random_numeric("num", 60, 1, 3.0, 1.0));
    t.columns.push_back(random_levels("cat", 60, 5, 2));
    t.columns.push_back(random_numeric("noisy", 60, 3));
    t.columns.push_back(random_numeric("skip", 60, 4));
    ColumnData holes = random_numeric("holes", 60, 5);
    for (std::size_t i = 0; i < holes.size(); i += 9) holes.cells[i] = CellValue::missing();
    t.columns.push_back(holes);

    PipelineConfig cfg;
    cfg.master_seed = 7;
    cfg.shuffletrain = false;
    cfg.assigncat["rtbn"] = {"num"};
    cfg.assigncat["DP10"] = {"cat"};
    cfg.assigncat["DPrt"] = {"noisy"};
    cfg.assigncat["excl"] = {"skip"};
    cfg.assigncat["dxd2"] = {"holes"};
    cfg.assigninfill["MLinfill"] = {"holes"};
    cfg.default_params["DPrt"] = {{"flip_prob", 0.5}};
    cfg.column_params["DPrt"]["noisy"] = {{"noisedistribution", std::string("laplace")}};
    cfg.global_params["cap"] = false;
    return fit(t, cfg).store;
}

}  // namespace

TEST_CASE("pipeline store round trips field for field") {
    PipelineStore store = fitted_store();
    std::string bytes = serialize_pipeline(store);
    PipelineStore back = deserialize_pipeline(bytes);
    CHECK(back == store);
}

TEST_CASE("serialization is involutive at the byte level") {
    PipelineStore store = fitted_store();
    std::string once = serialize_pipeline(store);
    std::string twice = serialize_pipeline(deserialize_pipeline(once));
    CHECK(once == twice);
}

TEST_CASE("multi-column category map survives the round trip") {
    PipelineStore store = fitted_store();
    PipelineStore back = deserialize_pipeline(serialize_pipeline(store));
    bool saw_1010 = false;
    for (const auto& s : back.sources) {
        for (const auto& b : s.bases) {
            if (b.category_id == "1010") {
                saw_1010 = true;
                CHECK(b.column_count >= 2);
                const auto& cat = std::get<CatBasis>(b.stats);
                CHECK(static_cast<int>(cat.column_count) == b.column_count);
                CHECK(!cat.levels.empty());
            }
        }
    }
    CHECK(saw_1010);
}

TEST_CASE("truncated payloads raise a parse error with a byte offset") {
    PipelineStore store = fitted_store();
    std::string bytes = serialize_pipeline(store);
    std::string truncated = bytes.substr(0, bytes.size() / 2);
    CHECK_THROWS_WITH_AS(static_cast<void>(deserialize_pipeline(truncated)),
                         doctest::Contains("byte"), std::runtime_error);
    CHECK_THROWS(static_cast<void>(deserialize_pipeline("not json at all")));
    CHECK_THROWS(static_cast<void>(deserialize_pipeline("{\"version\":\"other/9\"}")));
}

TEST_CASE("stored ML infill models replay on fresh processes") {
    PipelineStore store = fitted_store();
    PipelineStore back = deserialize_pipeline(serialize_pipeline(store));
    bool saw_model = false;
    for (const auto& s : back.sources) {
        if (s.header != "holes") continue;
        for (const auto& g : s.infill) {
            if (g.uses_model) {
                saw_model = true;
                CHECK(!g.models.empty());
                CHECK(!g.feature_headers.empty());
            }
        }
    }
    CHECK(saw_model);
}
