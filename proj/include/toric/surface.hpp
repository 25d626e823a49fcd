#pragma once

#include "toric/common.hpp"
#include "toric/dynamics.hpp"
#include "toric/geometry.hpp"
#include "toric/network.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace toric {

/// Polyline in the open positive quadrant running from near the x-axis to
/// near the y-axis. Segment i starts at vertices[i] and runs along the unit
/// vector directions[i] for lengths[i]; directions are kept explicitly since
/// close to the origin they cannot be recovered from vertex differences.
/// band_of_segment[i] is the index of the hyperplane whose uncertainty band
/// segment i crosses, or -1.
struct PolygonalCurve2D {
    std::vector<Vector> vertices;
    std::vector<Vector> directions;
    std::vector<double> lengths;
    std::vector<int> band_of_segment;
    double scale = 0.0;

    /// Outward normal of segment i.
    Vector normal(std::size_t i) const;
    Vector point(std::size_t i, double fraction) const;

    std::size_t segment_count() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
};

struct SurfaceSample {
    Vector x;
    /// Unit normal pointing away from the origin-side region.
    Vector normal;
};

struct SurfaceCertificate {
    std::vector<SurfaceSample> samples;
    double spacing = 0.0;
};

/// Third-quadrant half-line of a hyperplane in R^2 (unit, both entries < 0),
/// or an empty vector when the hyperplane has none.
Vector third_quadrant_direction(const Hyperplane& h);

/// Builds a polyline whose band crossings are straight segments along the
/// attracting direction of each band, one vertex in each bounded exp-cone.
/// Halves `scale` (up to 1000 times) until no segment touches a foreign band.
PolygonalCurve2D build_zero_separating_curve_2d(const Arrangement& arr, double delta, double scale);

/// Replaces each corner between two band segments by a chord whose slope is
/// strictly between the two attracting slopes.
PolygonalCurve2D make_faithful_2d(const PolygonalCurve2D& curve, const Arrangement& arr, double delta);

/// Smallest slope margin of the non-band segments that sit between two band
/// segments; +inf when there are none.
double faithfulness_margin(const PolygonalCurve2D& curve);

/// `per_segment` samples at the interior points (i + 1/2) / per_segment.
SurfaceCertificate curve_certificate(const PolygonalCurve2D& curve, int per_segment);

/// Degenerate one-dimensional separating "surface": a single point with
/// normal +1, placed outside the band of the origin.
SurfaceCertificate zero_separating_point_1d(const Arrangement& arr, double delta, double scale);

struct SeparationViolation {
    std::size_t sample = 0;
    Vector x;
    Vector normal;
    Vector generator;
    double dot = 0.0;
};

struct SeparationReport {
    std::vector<SeparationViolation> violations;
    bool passed() const noexcept { return violations.empty(); }
};

/// Passes iff g . normal >= -tol for every generator g of the inclusion cone
/// at every sample.
SeparationReport verify_zero_separating(const SurfaceCertificate& cert, const Arrangement& arr, double delta,
                                        double tol = 1e-9);
SeparationReport verify_zero_separating(const SurfaceCertificate& cert, const Fan& fan, double delta,
                                        double tol = 1e-9);

/// Distance to the polyline, positive on the side away from the origin.
double signed_distance_to_curve(const PolygonalCurve2D& curve, const Vector& x);

struct CrossingReport {
    double min_signed_distance = 0.0;
    std::vector<double> per_trajectory_min;
    std::vector<Vector> starts;
    long trajectories = 0;

    bool never_crossed() const noexcept { return min_signed_distance > 0.0; }
};

struct CrossingOptions {
    double switch_period = 1.0;
    /// Start points are drawn with log10 coordinates uniform in [lo, hi] and
    /// rejected until they lie beyond the curve.
    double start_log10_lo = -4.0;
    double start_log10_hi = 1.0;
    IntegrateOptions integrate{};
};

/// Integrates random piecewise-constant k-variable trajectories from starts
/// beyond the curve and reports the smallest signed distance reached.
CrossingReport trajectory_crossing_test(const PolygonalCurve2D& curve, const ReactionNetwork& net,
                                        const RateBand& band, int n_schedules, double horizon,
                                        std::uint64_t seed, const CrossingOptions& opts = {});
CrossingReport trajectory_crossing_test_serial(const PolygonalCurve2D& curve, const ReactionNetwork& net,
                                               const RateBand& band, int n_schedules, double horizon,
                                               std::uint64_t seed, const CrossingOptions& opts = {});

/// Log-space picture: bands as translucent strips, the curve as a polyline.
std::string curve_to_svg(const PolygonalCurve2D& curve, const Arrangement& arr, double delta);

} // namespace toric
