#pragma once

// Randomized property probes shared by the unit tests and the acceptance
// binary. Each returns how many probes held and a description of the first
// one that did not.

#include "toric/geometry.hpp"
#include "toric/random.hpp"

#include <sstream>
#include <string>

namespace probes {

using toric::ConeGenerators;
using toric::Rng;
using toric::Vector;

struct Tally {
    int passed = 0;
    int total = 0;
    std::string first_failure;

    bool ok() const { return total > 0 && passed == total; }
    void record(bool good, const std::string& what)
    {
        ++total;
        if (good) {
            ++passed;
        } else if (first_failure.empty()) {
            first_failure = what;
        }
    }
};

inline Vector random_vector(Rng& rng, int n, double lo = -1.0, double hi = 1.0)
{
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = rng.uniform(lo, hi);
    }
    return v;
}

inline ConeGenerators random_cone(Rng& rng, int n)
{
    int k = static_cast<int>(rng.uniform() * 6);
    std::vector<Vector> gens;
    for (int i = 0; i < k; ++i) {
        gens.push_back(random_vector(rng, n));
    }
    return ConeGenerators(n, std::move(gens));
}

inline toric::Arrangement random_arrangement(Rng& rng, int n, int h)
{
    toric::Arrangement arr(n);
    while (arr.size() < h) {
        Vector v = random_vector(rng, n);
        // integer-ish normals, like differences of complexes
        for (int i = 0; i < n; ++i) {
            v[i] = std::round(3.0 * v[i]);
        }
        if (v.norm() > 0.0) {
            arr.add(v);
        }
    }
    return arr;
}

inline std::string describe(const char* what, std::uint64_t probe)
{
    std::ostringstream s;
    s << what << " failed at probe " << probe;
    return s.str();
}

/// polar(polar(C)) == C, as mutual containment of generators.
inline Tally biduality(int count, std::uint64_t seed)
{
    Tally t;
    for (int i = 0; i < count; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        int n = 2 + static_cast<int>(rng.uniform() * 3);
        auto c = random_cone(rng, n);
        auto back = toric::polar_cone(toric::polar_cone(c));
        bool good = toric::cone_subset(c, back, 1e-7) && toric::cone_subset(back, c, 1e-7);
        t.record(good, describe("biduality", static_cast<std::uint64_t>(i)));
    }
    return t;
}

/// Every membership answer carries a checkable certificate.
inline Tally farkas(int count, std::uint64_t seed)
{
    Tally t;
    for (int i = 0; i < count; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        int n = 2 + static_cast<int>(rng.uniform() * 4);
        auto c = random_cone(rng, n);
        Vector v = random_vector(rng, n, -2.0, 2.0);
        auto m = toric::cone_contains(c, v);
        bool good;
        if (m.contained) {
            Vector sum = Vector::Zero(n);
            good = m.lambda.size() == static_cast<Eigen::Index>(c.gens.size());
            for (std::size_t g = 0; good && g < c.gens.size(); ++g) {
                good = m.lambda[static_cast<Eigen::Index>(g)] >= 0.0;
                sum += m.lambda[static_cast<Eigen::Index>(g)] * c.gens[g];
            }
            good = good && (sum - v).norm() <= 1e-9 * std::max(1.0, v.norm());
        } else {
            good = m.farkas.size() == n && m.farkas.dot(v) > 0.0;
            for (const auto& g : c.gens) {
                good = good && m.farkas.dot(g) <= 1e-12 * g.norm() * m.farkas.norm();
            }
        }
        t.record(good, describe("farkas", static_cast<std::uint64_t>(i)));
    }
    return t;
}

/// delta1 <= delta2 implies F(delta1, X) is inside F(delta2, X).
inline Tally delta_monotone(int count, std::uint64_t seed)
{
    Tally t;
    for (int i = 0; i < count; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        int n = 2 + static_cast<int>(rng.uniform() * 2);
        auto arr = random_arrangement(rng, n, 1 + static_cast<int>(rng.uniform() * 4));
        Vector X = random_vector(rng, n, -3.0, 3.0);
        double d1 = rng.uniform(0.0, 2.0);
        double d2 = d1 + rng.uniform(0.0, 2.0);
        auto small = toric::inclusion_cone(arr, d1, X);
        auto big = toric::inclusion_cone(arr, d2, X);
        t.record(toric::cone_subset(small, big), describe("delta monotonicity", static_cast<std::uint64_t>(i)));
    }
    return t;
}

/// Hyperplane form and face-fan form of the inclusion cone generate the same cone.
inline Tally fan_agreement(int count, std::uint64_t seed)
{
    Tally t;
    for (int i = 0; i < count; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        int n = 2 + static_cast<int>(rng.uniform() * 2);
        auto arr = random_arrangement(rng, n, 1 + static_cast<int>(rng.uniform() * 3));
        auto fan = toric::enumerate_face_fan(arr);
        Vector X = random_vector(rng, n, -3.0, 3.0);
        double delta = rng.uniform(0.0, 2.0);
        auto a = toric::inclusion_cone(arr, delta, X);
        auto b = toric::fan_inclusion_cone(fan, delta, X);
        bool good = toric::cone_subset(a, b, 1e-7) && toric::cone_subset(b, a, 1e-7);
        t.record(good, describe("fan agreement", static_cast<std::uint64_t>(i)));
    }
    return t;
}

} // namespace probes
