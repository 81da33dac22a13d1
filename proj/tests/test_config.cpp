#include "doctest.h"
#include "helpers.hpp"
#include "tabtree/config.hpp"
#include "tabtree/pipeline.hpp"

using namespace tabtree;
using namespace tabtree::testing;

namespace {

// The custom-tree recipe: a retain normalization supplemented by power-of-ten
// bins upstream and standard deviation bins downstream of the normalization.
const char* kNewtConfig = R"json({
  "pipeline": {
    "assigncat": {"newt": ["col1"]},
    "assigninfill": {"MLinfill": ["col1"]},
    "shuffletrain": false,
    "randomseed": 9
  },
  "transformdict": {
    "newt": {
      "parents": ["newt"],
      "siblings": [],
      "auntsuncles": ["pwr2"],
      "cousins": ["NArw"],
      "children": [],
      "niecesnephews": [],
      "coworkers": [],
      "friends": ["bins"]
    }
  },
  "processdict": {
    "newt": {
      "functionpointer": "retn",
      "NArowtype": "numeric",
      "MLinfilltype": "numeric",
      "labelctgy": "newt"
    }
  }
})json";

}  // namespace

TEST_CASE("custom family trees compose from the config file") {
    ConfigFile cfg = parse_config_text(kNewtConfig, builtin_registry());
    REQUIRE(cfg.extensions.size() == 1);
    CHECK(cfg.extensions[0].id == "newt");
    // functionpointer clones retn's process entry, including the suffix.
    CHECK(cfg.extensions[0].process.fit_fn == "retn");
    CHECK(cfg.extensions[0].process.suffix == "retn");
    CHECK(cfg.extensions[0].process.labelctgy == "newt");
    CHECK(cfg.pipeline.master_seed == 9);

    Registry reg = registry_with_extensions(builtin_registry(), cfg.extensions);
    CHECK(validate_registry(reg).empty());

    Table t;
    t.columns.push_back(num_col("col1", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}));
    FitResult r = fit(t, cfg.pipeline, reg);

    // retn retained (friends supplements), its stdev bins, the pwr2 decade
    // group, and the marker.
    bool saw_retn = false, saw_retn_bins = false, saw_pwr2 = false, saw_narw = false;
    for (const auto& col : r.train.columns) {
        if (col.header == "col1_retn") saw_retn = true;
        if (col.header.rfind("col1_retn_bins_", 0) == 0) saw_retn_bins = true;
        if (col.header.rfind("col1_pwr2_", 0) == 0) saw_pwr2 = true;
        if (col.header == "col1_NArw") saw_narw = true;
    }
    CHECK(saw_retn);
    CHECK(saw_retn_bins);
    CHECK(saw_pwr2);
    CHECK(saw_narw);
}

TEST_CASE("config parse emit parse is a fixed point") {
    ConfigFile cfg = parse_config_text(kNewtConfig, builtin_registry());
    std::string emitted = emit_config_text(cfg);
    ConfigFile again = parse_config_text(emitted, builtin_registry());
    CHECK(again.pipeline == cfg.pipeline);
    CHECK(again.extensions == cfg.extensions);
    CHECK(emit_config_text(again) == emitted);
}

TEST_CASE("unknown pipeline keys warn but do not fail") {
    const char* text = R"json({
      "pipeline": {"eval_ratio": 0.5, "numbercategoryheuristic": 255, "valpercent": 0.1}
    })json";
    ConfigFile cfg = parse_config_text(text, builtin_registry());
    CHECK(cfg.warnings.size() == 2);
    CHECK(cfg.pipeline.valpercent == 0.1);
}

TEST_CASE("config errors are specific") {
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config_text(R"({"processdict": {"x": {"functionpointer": "ghost"}}})",
                                            builtin_registry())),
        doctest::Contains("ghost"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config_text(R"({"transformdict": {"x": {"parents": []}}})",
                                            builtin_registry())),
        doctest::Contains("processdict"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config_text(R"({"processdict": {"x": {"NArowtype": "numeric"}}})",
                                            builtin_registry())),
        doctest::Contains("fit_fn"), std::runtime_error);
    CHECK_THROWS(static_cast<void>(parse_config_text("{invalid", builtin_registry())));
}

TEST_CASE("assignparam sections resolve into the config") {
    const char* text = R"json({
      "pipeline": {
        "assignparam": {
          "global_assignparam": {"cap": true},
          "default_assignparam": {"DPrt": {"sigma": 0.05, "flip_prob": 0.5}},
          "DPrt": {"number2": {"noisedistribution": "laplace"}}
        }
      }
    })json";
    ConfigFile cfg = parse_config_text(text, builtin_registry());
    CHECK(param_bool(cfg.pipeline.global_params, "cap", false));
    CHECK(param_number(cfg.pipeline.default_params.at("DPrt"), "sigma", 0) == 0.05);
    CHECK(param_string(cfg.pipeline.column_params.at("DPrt").at("number2"), "noisedistribution",
                       "") == "laplace");
}
