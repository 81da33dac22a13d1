#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tabtree {

// Deterministic random stream. Every (source header, returned header, phase,
// copy) tuple gets an independent substream derived from the master seed by a
// stable hash, so per-column parallelism and augmentation copies can never
// change results. Samplers are hand-rolled on top of mt19937_64 because the
// standard distributions are not bit-specified across implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Box-Muller, one variate per call.
    double gaussian(double mu, double sigma);

    // Laplace with standard deviation sigma (scale sigma / sqrt(2)).
    double laplace(double mu, double sigma);

    // Uniform integer in [0, bound), bound >= 1. Rejection sampled.
    std::uint64_t uniform_int(std::uint64_t bound);

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// Stable substream seed: FNV-1a over the tag strings folded into the master
// seed, finished with a splitmix64 mix.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> tags);

}  // namespace tabtree
