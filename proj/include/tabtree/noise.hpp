#pragma once

#include <string>

#include "tabtree/basis.hpp"
#include "tabtree/cell.hpp"
#include "tabtree/params.hpp"
#include "tabtree/rng.hpp"

namespace tabtree {

enum class NoiseDistribution { gaussian, laplace };

struct NoiseParams {
    double mu = 0.0;
    double sigma = 0.03;
    double flip_prob = 0.03;
    NoiseDistribution distribution = NoiseDistribution::gaussian;
};

// Experiment-default settings; `noisedistribution`, `mu`, `sigma` and
// `flip_prob` override from the resolved parameter map.
NoiseParams noise_params_from(const ParamMap& params);

// Ranged variants fix their bounds at fit time: the unit interval for the
// min-max form, the observed train output range for the retain form.
NoiseNumericBasis fit_numeric_noise(NoiseRange range, const ColumnData& train_input);

// Train-side numeric injection. Identity when traindata is false. Each entry
// is independently selected with probability flip_prob; for ranged variants
// the sampled noise is clipped to half the range width and then scaled by the
// headroom between the entry and the bound it moves toward, which keeps every
// output inside [lower, upper]. The unranged form adds the raw sample.
ColumnData inject_numeric(const ColumnData& column, const NoiseNumericBasis& basis,
                          const NoiseParams& params, Rng& rng, bool traindata);

// Categoric flip over ordinal codes: selected entries are replaced by a
// uniform draw over all level_count codes, original included.
ColumnData inject_categoric_flip(const ColumnData& column, int level_count,
                                 const NoiseParams& params, Rng& rng, bool traindata);

}  // namespace tabtree
