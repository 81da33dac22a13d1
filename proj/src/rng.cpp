#include "tabtree/rng.hpp"

#include <cmath>

namespace tabtree {

double Rng::gaussian(double mu, double sigma) {
    // u1 in (0,1] so the log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mu + sigma * z;
}

double Rng::laplace(double mu, double sigma) {
    double b = sigma / std::sqrt(2.0);
    double u = uniform() - 0.5;
    double sign = u < 0 ? -1.0 : 1.0;
    double mag = u < 0 ? -u : u;
    // Inverse CDF; 2*mag < 1 always holds since uniform() < 1.
    return mu - b * sign * std::log(1.0 - 2.0 * mag);
}

std::uint64_t Rng::uniform_int(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r = gen_();
    while (r >= limit) r = gen_();
    return r % bound;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> tags) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ master;
    for (const auto& tag : tags) {
        for (unsigned char c : tag) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        // Separator between tags so ("ab","c") != ("a","bc").
        h ^= 0x1f;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(h);
}

}  // namespace tabtree
