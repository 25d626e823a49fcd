#include <doctest.h>

#include "oracles.hpp"
#include "probes.hpp"
#include "toric/embedding.hpp"
#include "toric/surface.hpp"

#include <cmath>
#include <set>

using namespace toric;

namespace {

Vector v2(double a, double b)
{
    Vector v(2);
    v << a, b;
    return v;
}

// Counts band crossings of the unit arc in the open third quadrant by
// watching the cell signature of delta = 0 change along the arc.
int third_quadrant_crossings(const Arrangement& arr)
{
    int changes = 0;
    const double pi = std::acos(-1.0);
    CellSignature prev = locate_cell(arr, v2(std::cos(pi + 1e-9), std::sin(pi + 1e-9)), 0.0);
    for (int i = 1; i <= 100000; ++i) {
        double th = pi + (0.5 * pi - 2e-9) * i / 100000.0 + 1e-9;
        auto cur = locate_cell(arr, v2(std::cos(th), std::sin(th)), 0.0);
        for (std::size_t j = 0; j < cur.signs.size(); ++j) {
            changes += cur.signs[j] != prev.signs[j] && cur.signs[j] != 0;
        }
        prev = cur;
    }
    return changes;
}

void rotate_segment_normals(SurfaceCertificate& cert, std::size_t seg, int per)
{
    for (int k = 0; k < per; ++k) {
        auto& s = cert.samples[seg * static_cast<std::size_t>(per) + static_cast<std::size_t>(k)];
        s.normal = v2(-s.normal[1], s.normal[0]);
    }
}

} // namespace

TEST_CASE("third-quadrant half-lines")
{
    auto d = third_quadrant_direction(Hyperplane::from_normal(v2(1, -1)));
    REQUIRE(d.size() == 2);
    CHECK((d - v2(-1, -1) / std::sqrt(2.0)).norm() < 1e-15);
    auto steep = third_quadrant_direction(Hyperplane::from_normal(v2(2, -1)));
    REQUIRE(steep.size() == 2);
    CHECK(std::abs(steep.dot(v2(2, -1))) < 1e-15);
    CHECK((steep.array() < 0.0).all());
    CHECK(third_quadrant_direction(Hyperplane::from_normal(v2(1, 0))).size() == 0);
    CHECK(third_quadrant_direction(Hyperplane::from_normal(v2(1, 1))).size() == 0);
}

TEST_CASE("empty arrangement gives a single chord")
{
    Arrangement empty(2);
    auto curve = build_zero_separating_curve_2d(empty, 0.5, 2.0);
    REQUIRE(curve.segment_count() == 1);
    CHECK(curve.vertices.front()[0] == doctest::Approx(2.0));
    CHECK(curve.vertices.back()[1] == doctest::Approx(2.0));
    CHECK(curve.vertices.front()[1] < 1e-8);
    CHECK(curve.vertices.back()[0] < 1e-8);
    CHECK((curve.normal(0) - v2(1, 1) / std::sqrt(2.0)).norm() < 1e-12);
    CHECK(verify_zero_separating(curve_certificate(curve, 10), empty, 0.5).passed());

    auto same = make_faithful_2d(curve, empty, 0.5);
    CHECK(same.vertices == curve.vertices);
    CHECK(std::isinf(faithfulness_margin(curve)));
}

TEST_CASE("segment count follows the third-quadrant cell structure")
{
    for (std::uint64_t i = 0; i < 60; ++i) {
        Rng rng(61, i);
        auto arr = probes::random_arrangement(rng, 2, 1 + static_cast<int>(rng.uniform() * 5));
        double delta = rng.uniform(0.0, 1.0);
        auto curve = build_zero_separating_curve_2d(arr, delta, 1.0);
        int k = third_quadrant_crossings(arr);
        CAPTURE(i);
        int bands = 0;
        for (int b : curve.band_of_segment) {
            bands += b >= 0;
        }
        CHECK(bands == k);
        CHECK(curve.segment_count() == static_cast<std::size_t>(std::max(k, 1)));
        for (const auto& v : curve.vertices) {
            CHECK((v.array() > 0.0).all());
        }
    }
}

TEST_CASE("band segments run along the attracting direction")
{
    auto net = parse_network("species A B\nA <-> B ; kf=1 kr=1");
    auto cert = build_embedding(net, RateBand(0.5));
    auto curve = build_zero_separating_curve_2d(cert.arrangement, cert.delta0, 1.0);
    REQUIRE(curve.segment_count() == 1);
    REQUIRE(curve.band_of_segment[0] == 0);
    // x-space direction parallel to the hyperplane normal
    Vector n = cert.arrangement[0].normal;
    CHECK(std::abs(std::abs(curve.directions[0].dot(n)) - 1.0) < 1e-12);
    CHECK(verify_zero_separating(curve_certificate(curve, 10), cert.arrangement, cert.delta0).passed());
    auto f = make_faithful_2d(curve, cert.arrangement, cert.delta0);
    CHECK(f.vertices == curve.vertices);
}

TEST_CASE("constructed curves separate for random arrangements")
{
    for (std::uint64_t i = 0; i < 60; ++i) {
        Rng rng(62, i);
        auto arr = probes::random_arrangement(rng, 2, 1 + static_cast<int>(rng.uniform() * 5));
        double delta = rng.uniform(0.0, 2.0);
        CAPTURE(i);
        auto curve = build_zero_separating_curve_2d(arr, delta, 1.0);
        auto cert = curve_certificate(curve, 10);
        CHECK(cert.samples.size() == 10 * curve.segment_count());
        CHECK(verify_zero_separating(cert, arr, delta).passed());
        CHECK(verify_zero_separating(cert, enumerate_face_fan(arr), delta).passed());

        // endpoints hug the axes; the origin and (scale, scale) are on opposite sides
        CHECK(curve.vertices.front()[1] <= 1e-9 * curve.scale);
        CHECK(curve.vertices.back()[0] <= 1e-9 * curve.scale);
        CHECK(signed_distance_to_curve(curve, v2(curve.scale, curve.scale)) > 0.0);
        double tiny = 1e-3 * std::min(curve.vertices.front()[1], curve.vertices.back()[0]);
        CHECK(signed_distance_to_curve(curve, v2(tiny, tiny)) < 0.0);

        auto faithful = make_faithful_2d(curve, arr, delta);
        CHECK(verify_zero_separating(curve_certificate(faithful, 10), arr, delta).passed());
        CHECK(faithfulness_margin(faithful) >= 1e-6);
        auto twice = make_faithful_2d(faithful, arr, delta);
        REQUIRE(twice.vertices.size() == faithful.vertices.size());
        for (std::size_t v = 0; v < twice.vertices.size(); ++v) {
            CHECK((twice.vertices[v] - faithful.vertices[v]).norm() <= 1e-12 * faithful.vertices[v].norm());
        }
    }
}

TEST_CASE("a rotated band segment is reported")
{
    auto net = load_network(std::string(TORIC_CORPUS_DIR) + "/triangle.crn");
    auto cert = build_embedding(net, RateBand(0.5));
    auto curve = build_zero_separating_curve_2d(cert.arrangement, cert.delta0, 1.0);
    const int per = 10;
    for (std::size_t seg = 0; seg < curve.segment_count(); ++seg) {
        if (curve.band_of_segment[seg] < 0) {
            continue;
        }
        auto sc = curve_certificate(curve, per);
        rotate_segment_normals(sc, seg, per);
        auto rep = verify_zero_separating(sc, cert.arrangement, cert.delta0);
        REQUIRE_FALSE(rep.passed());
        std::set<std::size_t> segs;
        for (const auto& v : rep.violations) {
            segs.insert(v.sample / per);
            CHECK(v.generator.dot(v.normal) == doctest::Approx(v.dot));
            CHECK(v.dot < 0.0);
        }
        CHECK(segs == std::set<std::size_t>{seg});
    }
}

TEST_CASE("signed distance")
{
    Arrangement empty(2);
    auto curve = build_zero_separating_curve_2d(empty, 0.0, 2.0);
    CHECK(signed_distance_to_curve(curve, v2(3, 3)) == doctest::Approx(std::sqrt(2.0) * 2.0).epsilon(1e-6));
    CHECK(signed_distance_to_curve(curve, v2(0.5, 0.5)) < 0.0);
    CHECK(std::abs(signed_distance_to_curve(curve, v2(1, 1))) < 1e-8);
}

TEST_CASE("trajectories stay beyond the curve")
{
    auto net = parse_network("species A B\nA <-> B ; kf=1 kr=1");
    RateBand band(0.5);
    auto cert = build_embedding(net, band);
    auto curve = build_zero_separating_curve_2d(cert.arrangement, cert.delta0, 1.0);
    auto rep = trajectory_crossing_test(curve, net, band, 50, 20.0, 5);
    CHECK(rep.trajectories == 50);
    CHECK(rep.per_trajectory_min.size() == 50);
    CHECK(rep.never_crossed());

    auto again = trajectory_crossing_test(curve, net, band, 50, 20.0, 5);
    CHECK(again.per_trajectory_min == rep.per_trajectory_min);
    auto serial = trajectory_crossing_test_serial(curve, net, band, 50, 20.0, 5);
    CHECK(serial.per_trajectory_min == rep.per_trajectory_min);
}

TEST_CASE("zero field keeps the starting distance")
{
    ReactionNetwork empty({"A", "B"});
    auto curve = build_zero_separating_curve_2d(Arrangement(2), 0.0, 1.0);
    auto rep = trajectory_crossing_test(curve, empty, RateBand(0.5), 5, 3.0, 2);
    for (std::size_t i = 0; i < rep.starts.size(); ++i) {
        CHECK(rep.per_trajectory_min[i] == signed_distance_to_curve(curve, rep.starts[i]));
    }
}

TEST_CASE("crossing test preconditions")
{
    auto net = parse_network("species A B\nA <-> B ; kf=1 kr=1");
    auto curve = build_zero_separating_curve_2d(Arrangement(2), 0.0, 1.0);
    try {
        trajectory_crossing_test(curve, net, RateBand(0.5), 5, 0.0, 1);
        FAIL("expected InvalidHorizon");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidHorizon);
    }
    try {
        trajectory_crossing_test(curve, parse_network("species A B C\nA <-> B ; kf=1 kr=1"), RateBand(0.5), 5, 1.0, 1);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
    CHECK_THROWS_AS(build_zero_separating_curve_2d(Arrangement(3), 0.0, 1.0), Error);
    CHECK_THROWS_AS(build_zero_separating_curve_2d(Arrangement(2), -1.0, 1.0), Error);
}

TEST_CASE("one-dimensional separating point")
{
    auto net = parse_network("species A\n0 <-> A ; kf=1 kr=1");
    auto cert = build_embedding(net, RateBand(0.5));
    auto pt = zero_separating_point_1d(cert.arrangement, cert.delta0, 1.0);
    REQUIRE(pt.samples.size() == 1);
    CHECK(std::log(pt.samples[0].x[0]) < -cert.delta0);
    CHECK(pt.samples[0].normal[0] == 1.0);
    CHECK(verify_zero_separating(pt, cert.arrangement, cert.delta0).passed());
}

TEST_CASE("svg output")
{
    auto net = load_network(std::string(TORIC_CORPUS_DIR) + "/two_class_planar.crn");
    auto cert = build_embedding(net, RateBand(0.5));
    auto curve = build_zero_separating_curve_2d(cert.arrangement, cert.delta0, 1.0);
    auto svg = curve_to_svg(curve, cert.arrangement, cert.delta0);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
}
