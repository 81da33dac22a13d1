#include "tabtree/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace tabtree {

NoiseParams noise_params_from(const ParamMap& params) {
    NoiseParams p;
    p.mu = param_number(params, "mu", 0.0);
    p.sigma = param_number(params, "sigma", 0.03);
    p.flip_prob = param_number(params, "flip_prob", 0.03);
    if (p.sigma < 0.0) throw std::runtime_error("noise: sigma must be nonnegative");
    if (p.flip_prob < 0.0 || p.flip_prob > 1.0) {
        throw std::runtime_error("noise: flip_prob must lie in [0, 1]");
    }
    p.distribution = param_string(params, "noisedistribution", "gaussian") == "laplace"
                         ? NoiseDistribution::laplace
                         : NoiseDistribution::gaussian;
    return p;
}

NoiseNumericBasis fit_numeric_noise(NoiseRange range, const ColumnData& train_input) {
    NoiseNumericBasis b;
    b.range = range;
    if (range == NoiseRange::unit_interval) {
        b.lower = 0.0;
        b.upper = 1.0;
    } else if (range == NoiseRange::fitted_range) {
        bool any = false;
        for (const auto& cell : train_input.cells) {
            auto v = cell.as_number();
            if (!v) continue;
            if (!any) {
                b.lower = b.upper = *v;
                any = true;
            } else {
                b.lower = std::min(b.lower, *v);
                b.upper = std::max(b.upper, *v);
            }
        }
        if (!any) {
            throw std::runtime_error("noise: cannot fit a range on column '" + train_input.header +
                                     "' with no numeric entries");
        }
    }
    return b;
}

ColumnData inject_numeric(const ColumnData& column, const NoiseNumericBasis& basis,
                          const NoiseParams& params, Rng& rng, bool traindata) {
    ColumnData out = column;
    if (!traindata) return out;

    const bool ranged = basis.range != NoiseRange::none;
    const double half = ranged ? 0.5 * (basis.upper - basis.lower) : 0.0;
    if (ranged && half <= 0.0) {
        // Zero-width range: every entry already sits on both bounds.
        return out;
    }

    for (auto& cell : out.cells) {
        double u = rng.uniform();
        if (u >= params.flip_prob) continue;
        auto v = cell.as_number();
        double n = params.distribution == NoiseDistribution::laplace
                       ? rng.laplace(params.mu, params.sigma)
                       : rng.gaussian(params.mu, params.sigma);
        if (!v) continue;
        double x = *v;
        if (!ranged) {
            cell = CellValue::number(x + n);
            continue;
        }
        if (x < basis.lower || x > basis.upper) continue;
        if (n > half) n = half;
        if (n < -half) n = -half;
        double scaled = n >= 0.0 ? n * ((basis.upper - x) / half) : n * ((x - basis.lower) / half);
        double shifted = x + scaled;
        // The scaling bounds the result mathematically; the clamp absorbs
        // the last ulp of float rounding at the boundaries.
        if (shifted < basis.lower) shifted = basis.lower;
        if (shifted > basis.upper) shifted = basis.upper;
        cell = CellValue::number(shifted);
    }
    return out;
}

ColumnData inject_categoric_flip(const ColumnData& column, int level_count,
                                 const NoiseParams& params, Rng& rng, bool traindata) {
    if (level_count < 1) throw std::runtime_error("noise: level count must be >= 1");
    ColumnData out = column;
    if (!traindata) return out;
    for (auto& cell : out.cells) {
        double u = rng.uniform();
        if (u >= params.flip_prob) continue;
        std::uint64_t code = rng.uniform_int(static_cast<std::uint64_t>(level_count));
        if (cell.is_missing()) continue;
        cell = CellValue::number(static_cast<double>(code));
    }
    return out;
}

}  // namespace tabtree
