#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tabtree/cell.hpp"
#include "tabtree/rng.hpp"

namespace tabtree::testing {

inline ColumnData num_col(std::string header, std::vector<double> values) {
    ColumnData c;
    c.header = std::move(header);
    for (double v : values) c.cells.push_back(CellValue::number(v));
    return c;
}

inline ColumnData text_col(std::string header, std::vector<std::string> values) {
    ColumnData c;
    c.header = std::move(header);
    for (auto& v : values) c.cells.push_back(CellValue::text(std::move(v)));
    return c;
}

inline std::vector<double> numbers_of(const ColumnData& c) {
    std::vector<double> out;
    for (const auto& cell : c.cells) {
        auto v = cell.as_number();
        out.push_back(v ? *v : std::nan(""));
    }
    return out;
}

inline ColumnData random_numeric(std::string header, std::size_t n, std::uint64_t seed,
                                 double scale = 1.0, double shift = 0.0) {
    Rng rng(seed);
    ColumnData c;
    c.header = std::move(header);
    for (std::size_t i = 0; i < n; ++i) {
        c.cells.push_back(CellValue::number(rng.gaussian(0.0, 1.0) * scale + shift));
    }
    return c;
}

inline ColumnData random_levels(std::string header, std::size_t n, int k, std::uint64_t seed) {
    Rng rng(seed);
    ColumnData c;
    c.header = std::move(header);
    for (std::size_t i = 0; i < n; ++i) {
        c.cells.push_back(CellValue::text("lvl" + std::to_string(rng.uniform_int(k))));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Independent oracles: deliberately brute-force implementations checked
// against the engine.

inline double oracle_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double oracle_popstd(const std::vector<double>& v) {
    double mu = oracle_mean(v);
    double sq = 0.0;
    for (double x : v) sq += (x - mu) * (x - mu);
    return std::sqrt(sq / static_cast<double>(v.size()));
}

inline double oracle_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double oracle_mad(const std::vector<double>& v) {
    double med = oracle_median(v);
    std::vector<double> dev;
    for (double x : v) dev.push_back(std::fabs(x - med));
    return oracle_median(dev);
}

// Point-wise differencing, chained `order` times; NaN marks undefined.
inline std::vector<double> oracle_dxdt(std::vector<double> x, int periods, int order) {
    for (int k = 0; k < order; ++k) {
        std::vector<double> out(x.size(), std::nan(""));
        for (std::size_t i = periods; i < x.size(); ++i) {
            if (!std::isnan(x[i]) && !std::isnan(x[i - periods])) {
                out[i] = x[i] - x[i - periods];
            }
        }
        x = std::move(out);
    }
    return x;
}

inline std::vector<double> oracle_dxd2(const std::vector<double>& x, int periods, int window) {
    auto mean_to = [&](std::size_t end) {
        if (end + 1 < static_cast<std::size_t>(window)) return std::nan("");
        double s = 0.0;
        for (int k = 0; k < window; ++k) {
            if (std::isnan(x[end - k])) return std::nan("");
            s += x[end - k];
        }
        return s / window;
    };
    std::vector<double> out(x.size(), std::nan(""));
    for (std::size_t i = periods; i < x.size(); ++i) {
        double a = mean_to(i);
        double b = mean_to(i - periods);
        if (!std::isnan(a) && !std::isnan(b)) out[i] = a - b;
    }
    return out;
}

// Pair-counting AUC with half credit for ties.
inline double oracle_auc(const std::vector<double>& scores, const std::vector<double>& labels) {
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] <= 0.5) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] > 0.5) continue;
            pairs += 1.0;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / pairs;
}

}  // namespace tabtree::testing
