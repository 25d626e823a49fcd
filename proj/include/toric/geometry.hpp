#pragma once

#include "toric/common.hpp"

#include <vector>

namespace toric {

/// Hyperplane through the origin with unit normal.
struct Hyperplane {
    Vector normal;

    /// Normalizes `n`; throws InvalidArgument for a zero vector.
    static Hyperplane from_normal(const Vector& n);
    double signed_distance(const Vector& X) const { return normal.dot(X); }
};

/// Hyperplanes deduplicated up to sign; no two normals are parallel.
class Arrangement {
public:
    explicit Arrangement(int dimension = 0) : dim_(dimension) {}

    /// Adds the hyperplane orthogonal to `n` unless a parallel one exists.
    /// Returns the index of the (possibly pre-existing) hyperplane.
    int add(const Vector& n);
    int find(const Vector& n) const;

    int dimension() const noexcept { return dim_; }
    int size() const noexcept { return static_cast<int>(planes_.size()); }
    bool empty() const noexcept { return planes_.empty(); }
    const std::vector<Hyperplane>& hyperplanes() const noexcept { return planes_; }
    const Hyperplane& operator[](int i) const { return planes_.at(static_cast<std::size_t>(i)); }

private:
    int dim_;
    std::vector<Hyperplane> planes_;
};

/// Finite generator set of a convex cone; empty means the zero cone.
struct ConeGenerators {
    int dim = 0;
    std::vector<Vector> gens;

    ConeGenerators() = default;
    ConeGenerators(int dimension, std::vector<Vector> generators);

    bool is_zero_cone() const noexcept { return gens.empty(); }
    Matrix as_matrix() const;
};

/// Per-hyperplane sign in {-1, 0, +1}; 0 marks |n.X| < delta.
struct CellSignature {
    std::vector<int> signs;

    bool in_some_band() const;
    bool operator==(const CellSignature&) const = default;
};

/// Nonnegative least squares (Lawson-Hanson): argmin_{lambda >= 0} |G lambda - v|.
Vector nnls(const Matrix& G, const Vector& v);

/// Outcome of a cone membership test. On acceptance `lambda` reproduces v;
/// on rejection `farkas` satisfies farkas.g <= 0 for all generators and
/// farkas.v > 0.
struct Membership {
    bool contained = false;
    Vector lambda;
    Vector farkas;
    double residual = 0.0;
};

inline constexpr double kDefaultConeTol = 1e-9;

Membership cone_contains(const ConeGenerators& cone, const Vector& v, double tol = kDefaultConeTol);
/// Every generator of `inner` lies in `outer`.
bool cone_subset(const ConeGenerators& inner, const ConeGenerators& outer, double tol = kDefaultConeTol);

inline constexpr int kMaxPolarDimension = 6;

/// Generators of {v : v.g <= 0 for all g}, by double description.
/// Throws DimensionTooLarge above kMaxPolarDimension.
ConeGenerators polar_cone(const ConeGenerators& cone);

/// Euclidean distance from X to the cone (projection via NNLS).
double point_to_cone_distance(const ConeGenerators& cone, const Vector& X);

CellSignature locate_cell(const Arrangement& arr, const Vector& X, double delta);

/// F_{H,delta}(X): for each hyperplane, -s*normal when the sign s is certain,
/// both +-normal inside the band.
ConeGenerators inclusion_cone(const Arrangement& arr, double delta, const Vector& X);

using Fan = std::vector<ConeGenerators>;

/// Cone generated by the polars of all fan cones at distance < delta from X.
ConeGenerators fan_inclusion_cone(const Fan& fan, double delta, const Vector& X);

/// Every cone {X : sigma_j n_j.X >= 0, n_k.X = 0 for sigma_k = 0} over all
/// sign vectors sigma in {-1,0,+1}^|H|. Exponential in |H|; intended for
/// cross-checks on small arrangements.
Fan enumerate_face_fan(const Arrangement& arr);

} // namespace toric
