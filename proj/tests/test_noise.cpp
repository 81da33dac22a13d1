#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "tabtree/noise.hpp"

using namespace tabtree;
using namespace tabtree::testing;

TEST_CASE("traindata false is a bit-exact passthrough") {
    auto col = random_numeric("x", 500, 7);
    NoiseNumericBasis basis = fit_numeric_noise(NoiseRange::fitted_range, col);
    NoiseParams p;
    p.flip_prob = 1.0;
    p.sigma = 0.5;
    Rng rng(123);
    ColumnData out = inject_numeric(col, basis, p, rng, false);
    CHECK(out.cells == col.cells);

    Rng rng2(123);
    ColumnData flipped = inject_categoric_flip(num_col("c", {0, 1, 0, 1}), 2, p, rng2, false);
    CHECK(flipped.cells == std::vector<CellValue>{CellValue::number(0), CellValue::number(1),
                                                  CellValue::number(0), CellValue::number(1)});
}

TEST_CASE("unit interval noise at the boundary has zero headroom") {
    NoiseNumericBasis basis;
    basis.range = NoiseRange::unit_interval;
    basis.lower = 0.0;
    basis.upper = 1.0;
    NoiseParams p;
    p.flip_prob = 1.0;
    p.sigma = 0.0;
    p.mu = 0.3;  // deterministic +0.3 sample
    Rng rng(5);
    auto out = inject_numeric(num_col("x", {1.0, 0.0, 0.5}), basis, p, rng, true);
    CHECK(out.cells[0].number_value() == doctest::Approx(1.0));
    // x=0: positive noise scaled by full headroom (1-0)/0.5 -> 0.3*2 = 0.6.
    CHECK(out.cells[1].number_value() == doctest::Approx(0.6));
    // x=0.5: headroom (1-0.5)/0.5 = 1 -> 0.8.
    CHECK(out.cells[2].number_value() == doctest::Approx(0.8));
}

TEST_CASE("zero sigma and zero mu noise is the identity even when selected") {
    NoiseNumericBasis basis = fit_numeric_noise(NoiseRange::fitted_range, num_col("x", {-2, 2}));
    NoiseParams p;
    p.flip_prob = 1.0;
    p.sigma = 0.0;
    p.mu = 0.0;
    Rng rng(9);
    auto col = random_numeric("x", 100, 10);
    NoiseNumericBasis fitted = fit_numeric_noise(NoiseRange::fitted_range, col);
    auto out = inject_numeric(col, fitted, p, rng, true);
    CHECK(out.cells == col.cells);
}

TEST_CASE("ranged noise never exits the fitted range") {
    auto col = random_numeric("x", 2000, 11, 0.25, 0.5);
    NoiseNumericBasis basis = fit_numeric_noise(NoiseRange::fitted_range, col);
    NoiseParams p;
    p.flip_prob = 1.0;
    p.sigma = 0.8;
    Rng rng(31);
    for (int round = 0; round < 50; ++round) {
        auto out = inject_numeric(col, basis, p, rng, true);
        for (const auto& cell : out.cells) {
            CHECK(cell.number_value() >= basis.lower);
            CHECK(cell.number_value() <= basis.upper);
        }
    }
}

TEST_CASE("selected fraction tracks flip_prob within binomial bounds") {
    const std::size_t n = 100000;
    auto col = random_numeric("x", n, 17);
    NoiseNumericBasis basis;  // unranged adds raw noise
    for (double fp : {0.03, 0.5, 1.0}) {
        NoiseParams p;
        p.flip_prob = fp;
        p.sigma = 1.0;
        Rng rng(derive_seed(41, {"fp", std::to_string(fp)}));
        auto out = inject_numeric(col, basis, p, rng, true);
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (out.cells[i].number_value() != col.cells[i].number_value()) ++changed;
        }
        double sigma3 = 3.0 * std::sqrt(n * fp * (1.0 - fp));
        CHECK(std::fabs(static_cast<double>(changed) - fp * n) <= sigma3 + 1e-9);
    }
}

TEST_CASE("categoric flip replaces uniformly, original included") {
    NoiseParams p;
    p.flip_prob = 1.0;
    const std::size_t n = 100000;
    std::vector<double> zeros(n, 0.0);
    Rng rng(23);
    auto out = inject_categoric_flip(num_col("c", zeros), 2, p, rng, true);
    std::size_t changed = 0;
    for (const auto& cell : out.cells) {
        if (cell.number_value() != 0.0) ++changed;
    }
    // Uniform draw over {0,1} changes about half.
    double sigma3 = 3.0 * std::sqrt(n * 0.25);
    CHECK(std::fabs(static_cast<double>(changed) - 0.5 * n) <= sigma3);
}

TEST_CASE("single level flips are always identity") {
    NoiseParams p;
    p.flip_prob = 1.0;
    Rng rng(29);
    auto col = num_col("c", std::vector<double>(200, 0.0));
    auto out = inject_categoric_flip(col, 1, p, rng, true);
    CHECK(out.cells == col.cells);

    p.flip_prob = 0.0;
    Rng rng2(30);
    auto col2 = num_col("c", {0, 1, 2, 1, 0});
    auto out2 = inject_categoric_flip(col2, 3, p, rng2, true);
    CHECK(out2.cells == col2.cells);
}

TEST_CASE("laplace noise hits the requested standard deviation") {
    Rng rng(77);
    const std::size_t n = 200000;
    std::vector<double> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) samples.push_back(rng.laplace(0.0, 0.5));
    CHECK(std::fabs(oracle_mean(samples)) < 0.01);
    CHECK(oracle_popstd(samples) == doctest::Approx(0.5).epsilon(0.03));

    // Param plumbing: noisedistribution selects laplace.
    ParamMap params{{"noisedistribution", std::string("laplace")}, {"sigma", 0.25}};
    NoiseParams p = noise_params_from(params);
    CHECK(p.distribution == NoiseDistribution::laplace);
    CHECK(p.sigma == 0.25);
}

TEST_CASE("same seed reproduces, different seeds differ") {
    auto col = random_numeric("x", 300, 3);
    NoiseNumericBasis basis = fit_numeric_noise(NoiseRange::fitted_range, col);
    NoiseParams p;
    p.flip_prob = 0.5;
    p.sigma = 0.1;
    Rng a(100), b(100), c(101);
    auto out_a = inject_numeric(col, basis, p, a, true);
    auto out_b = inject_numeric(col, basis, p, b, true);
    auto out_c = inject_numeric(col, basis, p, c, true);
    CHECK(out_a.cells == out_b.cells);
    CHECK(out_a.cells != out_c.cells);
}

TEST_CASE("noise params reject nonsense") {
    CHECK_THROWS(noise_params_from(ParamMap{{"sigma", -1.0}}));
    CHECK_THROWS(noise_params_from(ParamMap{{"flip_prob", 2.0}}));
    Rng rng(1);
    NoiseParams p;
    CHECK_THROWS(inject_categoric_flip(num_col("c", {0}), 0, p, rng, true));
}
