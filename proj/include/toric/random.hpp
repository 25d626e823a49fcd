#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace toric {

/// Seeded generator with a portable uniform draw. mt19937_64 output is fixed
/// by the standard; std:: distributions are not, so draws go through here.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : gen_(mix(seed, stream)) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// exp(U[log lo, log hi]).
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    std::uint64_t bits() { return gen_(); }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream)
    {
        // splitmix64 finalizer over the pair
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace toric
