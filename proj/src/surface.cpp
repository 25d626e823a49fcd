#include "toric/surface.hpp"
#include "toric/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace toric {

namespace {

constexpr double kTinyFraction = 1e-10;
constexpr int kMaxHalvings = 1000;
constexpr double kFaithfulPad = 1e-6;
constexpr double kMinSlopeMargin = 1e-6;

Vector vec2(double a, double b)
{
    Vector v(2);
    v << a, b;
    return v;
}

void require_planar(const Arrangement& arr)
{
    if (arr.dimension() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "planar curve needs a 2-dimensional arrangement");
    }
}

void require_delta(double delta)
{
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorCode::InvalidArgument, "delta must be finite and >= 0");
    }
}

double log_dot(const Vector& n, const Vector& z)
{
    return n[0] * std::log(z[0]) + n[1] * std::log(z[1]);
}

Vector outward(const Vector& u) { return vec2(u[1], -u[0]); }

// Range of n . log(a + t u) over t in [0, len].
std::pair<double, double> log_linear_range(const Vector& n, const Vector& a, const Vector& u, double len)
{
    auto f = [&](double t) { return log_dot(n, a + t * u); };
    double f0 = f(0.0), f1 = f(len);
    double lo = std::min(f0, f1), hi = std::max(f0, f1);
    double denom = u[0] * u[1] * (n[0] + n[1]);
    if (std::abs(n[0] + n[1]) > 1e-14 && denom != 0.0) {
        double ts = -(n[0] * u[0] * a[1] + n[1] * u[1] * a[0]) / denom;
        if (ts > 0.0 && ts < len) {
            double v = f(ts);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    return {lo, hi};
}

// Exact check of one segment: foreign bands are avoided, its own band (if
// any) is crossed, and the constant cone away from the bands points outward.
bool segment_valid(const Arrangement& arr, double delta, const Vector& a, const Vector& u, double len, int band)
{
    Vector b = a + len * u;
    if (!(len > 0.0) || !((a.array() > 0.0).all() && (b.array() > 0.0).all())) {
        return false;
    }
    Vector nu = outward(u);
    Vector mid = a + 0.5 * len * u;
    for (int i = 0; i < arr.size(); ++i) {
        const Vector& n = arr[i].normal;
        if (i == band) {
            double fa = log_dot(n, a), fb = log_dot(n, b);
            if (std::abs(fa) < delta || std::abs(fb) < delta || fa * fb >= 0.0) {
                return false;
            }
            if (std::abs(nu.dot(n)) > 1e-12) {
                return false;
            }
            continue;
        }
        auto r = log_linear_range(n, a, u, len);
        if (r.first < delta && r.second > -delta) {
            return false;
        }
        if (delta == 0.0 && r.first <= 0.0 && r.second >= 0.0) {
            return false;
        }
        double s = log_dot(n, mid) > 0.0 ? 1.0 : -1.0;
        if (nu.dot(-s * n) < -1e-12) {
            return false;
        }
    }
    return true;
}

bool curve_valid(const PolygonalCurve2D& c, const Arrangement& arr, double delta)
{
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
        if (!segment_valid(arr, delta, c.vertices[i], c.directions[i], c.lengths[i], c.band_of_segment[i])) {
            return false;
        }
    }
    return true;
}

struct BandLine {
    int index;
    Vector d;
};

void push_segment(PolygonalCurve2D& c, const Vector& u, double len, int band)
{
    c.directions.push_back(u);
    c.lengths.push_back(len);
    c.band_of_segment.push_back(band);
    c.vertices.push_back(c.vertices.back() + len * u);
}

// Parameter at which the walk from `start` along u (x decreasing) reaches
// m . log z = 0; negative when the start is already on the wrong side.
double walk_to_ray(const Vector& start, const Vector& u, const Vector& m)
{
    if (!(log_dot(m, start) > 0.0)) {
        return -1.0;
    }
    double lo = 0.0, hi = start[0] / -u[0];
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        Vector z = start + mid * u;
        if (z[0] > 0.0 && log_dot(m, z) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

// Segment j runs along u_j = (d_j.y, -d_j.x), orthogonal in x-space to its
// half-line. Segment 1 passes through the point of half-line 1 whose largest
// coordinate is scale / 2, which keeps (scale, scale) strictly beyond the
// curve (x falls and y rises along it); each later segment starts where the previous one
// meets the bisector ray of the two half-lines. Empty result on failure.
PolygonalCurve2D place_curve(const std::vector<BandLine>& lines, double scale)
{
    PolygonalCurve2D c;
    c.scale = scale;
    if (lines.empty()) {
        const double tiny = kTinyFraction * scale;
        Vector a = vec2(scale, tiny);
        Vector u = vec2(tiny - scale, scale - tiny);
        double len = u.norm();
        c.vertices.push_back(a);
        push_segment(c, u / len, len, -1);
        return c;
    }
    const std::size_t k = lines.size();
    std::vector<Vector> u;
    for (const auto& l : lines) {
        u.push_back(vec2(l.d[1], -l.d[0]));
    }
    // half-lines stay in the unit box, so the anchor is (1, 1) for scale >= 2
    double t = std::max(0.0, std::log(0.5 * scale) / lines[0].d.maxCoeff());
    Vector p = (t * lines[0].d).array().exp();
    // back along u_1 to y = tiny * p.y
    double back = p[1] * (1.0 - kTinyFraction) / u[0][1];
    c.vertices.push_back(p - back * u[0]);
    double len = back;

    Vector cur = p;
    for (std::size_t j = 0; j + 1 < k; ++j) {
        Vector b = lines[j].d + lines[j + 1].d;
        double s = walk_to_ray(cur, u[j], vec2(-b[1], b[0]));
        if (!(s > 0.0)) {
            return PolygonalCurve2D{};
        }
        push_segment(c, u[j], len + s, lines[j].index);
        cur = c.vertices.back();
        len = 0.0;
    }
    double fwd = cur[0] * (1.0 - kTinyFraction) / -u[k - 1][0];
    push_segment(c, u[k - 1], len + fwd, lines[k - 1].index);
    return c;
}

// Parameter t in [0, len] at which n . log(a + t u) = target, assuming
// monotonicity along the segment.
double solve_on_segment(const Vector& n, const Vector& a, const Vector& u, double len, double target)
{
    double lo = 0.0, hi = len;
    bool lo_above = log_dot(n, a) > target;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if ((log_dot(n, a + mid * u) > target) == lo_above) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

double angle_of(const Vector& u) { return std::atan2(u[1], u[0]); }

double slope_margin(const Vector& uj, const Vector& uc, const Vector& uk)
{
    double tj = angle_of(uj), tc = angle_of(uc), tk = angle_of(uk);
    double sgn = tk > tj ? 1.0 : -1.0;
    return std::min(sgn * (tc - tj), sgn * (tk - tc));
}

} // namespace

Vector PolygonalCurve2D::normal(std::size_t i) const { return outward(directions.at(i)); }

Vector PolygonalCurve2D::point(std::size_t i, double fraction) const
{
    return vertices.at(i) + (fraction * lengths.at(i)) * directions.at(i);
}

Vector third_quadrant_direction(const Hyperplane& h)
{
    if (h.normal.size() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "third-quadrant direction needs a planar hyperplane");
    }
    double a = h.normal[0], b = h.normal[1];
    if (!(a * b < 0.0)) {
        return Vector();
    }
    return vec2(-std::abs(b), -std::abs(a)) / std::hypot(a, b);
}

PolygonalCurve2D build_zero_separating_curve_2d(const Arrangement& arr, double delta, double scale)
{
    require_planar(arr);
    require_delta(delta);
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::InvalidArgument, "scale must be positive");
    }
    std::vector<BandLine> lines;
    for (int i = 0; i < arr.size(); ++i) {
        Vector d = third_quadrant_direction(arr[i]);
        if (d.size() == 2) {
            lines.push_back({i, d});
        }
    }
    // steep (close to the x-axis side of the quadrant) first
    std::sort(lines.begin(), lines.end(),
              [](const BandLine& p, const BandLine& q) { return p.d[1] / p.d[0] > q.d[1] / q.d[0]; });

    for (int h = 0; h <= kMaxHalvings; ++h) {
        PolygonalCurve2D c = place_curve(lines, scale);
        if (!c.vertices.empty() && curve_valid(c, arr, delta)) {
            return c;
        }
        scale *= 0.5;
    }
    throw Error(ErrorCode::BandsOverlap, "no scale separates the curve from foreign bands");
}

PolygonalCurve2D make_faithful_2d(const PolygonalCurve2D& curve, const Arrangement& arr, double delta)
{
    require_planar(arr);
    require_delta(delta);
    const std::size_t segs = curve.segment_count();
    // trim[i] = (cut at start, cut at end) of segment i; chord[i] after segment i
    std::vector<std::pair<double, double>> trim(segs, {0.0, 0.0});
    std::vector<bool> chord(segs, false);
    for (std::size_t i = 0; i + 1 < segs; ++i) {
        const int bj = curve.band_of_segment[i];
        const int bk = curve.band_of_segment[i + 1];
        if (bj < 0 || bk < 0) {
            continue;
        }
        const Vector& V = curve.vertices[i + 1];
        const Vector& uj = curve.directions[i];
        const Vector& uk = curve.directions[i + 1];
        const Vector& nj = arr[bj].normal;
        const Vector& nk = arr[bk].normal;
        double sj = log_dot(nj, V) > 0.0 ? 1.0 : -1.0;
        double sk = log_dot(nk, V) > 0.0 ? 1.0 : -1.0;
        double target_j = sj * (delta * (1.0 + kFaithfulPad) + kFaithfulPad);
        double target_k = sk * (delta * (1.0 + kFaithfulPad) + kFaithfulPad);
        double alpha = curve.lengths[i] - solve_on_segment(nj, curve.vertices[i], uj, curve.lengths[i], target_j);
        double beta = solve_on_segment(nk, V, uk, curve.lengths[i + 1], target_k);

        bool placed = false;
        double lambda = 1.0;
        for (int it = 0; it < 60 && !placed; ++it) {
            Vector w = lambda * (alpha * uj + beta * uk);
            double len = w.norm();
            Vector E = curve.vertices[i] + (curve.lengths[i] - lambda * alpha) * uj;
            placed = len > 0.0 && segment_valid(arr, delta, E, w / len, len, -1);
            if (!placed) {
                lambda *= 0.5;
            }
        }
        if (!placed) {
            throw Error(ErrorCode::InfeasibleAdjustment,
                        "no chord avoids the bands around corner " + std::to_string(i + 1));
        }
        if (!(slope_margin(uj, alpha * uj + beta * uk, uk) >= kMinSlopeMargin)) {
            throw Error(ErrorCode::InfeasibleAdjustment,
                        "chord slope margin too small at corner " + std::to_string(i + 1));
        }
        trim[i].second = lambda * alpha;
        trim[i + 1].first = lambda * beta;
        chord[i] = true;
    }

    if (std::none_of(chord.begin(), chord.end(), [](bool b) { return b; })) {
        return curve;
    }
    PolygonalCurve2D out;
    out.scale = curve.scale;
    out.vertices.push_back(curve.point(0, trim[0].first / curve.lengths[0]));
    for (std::size_t i = 0; i < segs; ++i) {
        const Vector& u = curve.directions[i];
        push_segment(out, u, curve.lengths[i] - trim[i].first - trim[i].second, curve.band_of_segment[i]);
        if (chord[i]) {
            Vector S = curve.vertices[i + 1] + trim[i + 1].first * curve.directions[i + 1];
            Vector w = trim[i].second * u + trim[i + 1].first * curve.directions[i + 1];
            double len = w.norm();
            push_segment(out, w / len, len, -1);
            out.vertices.back() = S;
        }
    }
    return out;
}

double faithfulness_margin(const PolygonalCurve2D& curve)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < curve.segment_count(); ++i) {
        if (curve.band_of_segment[i] >= 0 || curve.band_of_segment[i - 1] < 0 || curve.band_of_segment[i + 1] < 0) {
            continue;
        }
        best = std::min(best, slope_margin(curve.directions[i - 1], curve.directions[i], curve.directions[i + 1]));
    }
    return best;
}

SurfaceCertificate curve_certificate(const PolygonalCurve2D& curve, int per_segment)
{
    if (per_segment < 1) {
        throw Error(ErrorCode::InvalidArgument, "per_segment must be >= 1");
    }
    SurfaceCertificate cert;
    for (std::size_t s = 0; s < curve.segment_count(); ++s) {
        Vector nu = curve.normal(s);
        for (int i = 0; i < per_segment; ++i) {
            cert.samples.push_back({curve.point(s, (i + 0.5) / per_segment), nu});
        }
        cert.spacing = std::max(cert.spacing, curve.lengths[s] / per_segment);
    }
    return cert;
}

SurfaceCertificate zero_separating_point_1d(const Arrangement& arr, double delta, double scale)
{
    if (arr.dimension() != 1) {
        throw Error(ErrorCode::DimensionMismatch, "point surface needs a 1-dimensional arrangement");
    }
    require_delta(delta);
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::InvalidArgument, "scale must be positive");
    }
    if (!arr.empty()) {
        int h = 0;
        while (!(std::log(scale) < -delta)) {
            if (++h > kMaxHalvings) {
                throw Error(ErrorCode::BandsOverlap, "point cannot leave the band");
            }
            scale *= 0.5;
        }
    }
    SurfaceCertificate cert;
    Vector x(1), nu(1);
    x << scale;
    nu << 1.0;
    cert.samples.push_back({x, nu});
    return cert;
}

namespace {

template <class ConeAt>
SeparationReport verify_samples(const SurfaceCertificate& cert, int dim, double tol, ConeAt cone_at)
{
    SeparationReport rep;
    for (std::size_t i = 0; i < cert.samples.size(); ++i) {
        const auto& s = cert.samples[i];
        require_dimension(s.x.size(), dim, "sample point");
        require_dimension(s.normal.size(), dim, "sample normal");
        if (!((s.x.array() > 0.0).all())) {
            throw Error(ErrorCode::InvalidArgument, "sample points must be strictly positive");
        }
        Vector X = s.x.array().log();
        ConeGenerators cone = cone_at(X);
        for (const auto& g : cone.gens) {
            double d = g.dot(s.normal);
            if (d < -tol * std::max(1.0, g.norm())) {
                rep.violations.push_back({i, s.x, s.normal, g, d});
            }
        }
    }
    return rep;
}

} // namespace

SeparationReport verify_zero_separating(const SurfaceCertificate& cert, const Arrangement& arr, double delta,
                                        double tol)
{
    require_delta(delta);
    return verify_samples(cert, arr.dimension(), tol,
                          [&](const Vector& X) { return inclusion_cone(arr, delta, X); });
}

SeparationReport verify_zero_separating(const SurfaceCertificate& cert, const Fan& fan, double delta,
                                        double tol)
{
    require_delta(delta);
    if (fan.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty fan");
    }
    return verify_samples(cert, fan.front().dim, tol,
                          [&](const Vector& X) { return fan_inclusion_cone(fan, delta, X); });
}

double signed_distance_to_curve(const PolygonalCurve2D& curve, const Vector& x)
{
    require_dimension(x.size(), 2, "point");
    const auto& v = curve.vertices;
    if (v.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "curve has no segments");
    }
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        Vector u = v[i + 1] - v[i];
        double t = std::clamp((x - v[i]).dot(u) / u.squaredNorm(), 0.0, 1.0);
        dist = std::min(dist, (x - (v[i] + t * u)).norm());
    }
    // origin-side region: polygon closed through the axes
    std::vector<Vector> poly;
    poly.push_back(vec2(0.0, 0.0));
    poly.push_back(vec2(v.front()[0], 0.0));
    for (const auto& p : v) poly.push_back(p);
    poly.push_back(vec2(0.0, v.back()[1]));
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vector& a = poly[i];
        const Vector& b = poly[j];
        if ((a[1] > x[1]) != (b[1] > x[1])) {
            double xc = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if (x[0] < xc) inside = !inside;
        }
    }
    return inside ? -dist : dist;
}

namespace {

void check_crossing_args(const PolygonalCurve2D& curve, const ReactionNetwork& net, int n, double horizon)
{
    if (net.dimension() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "crossing test needs a 2-species network");
    }
    if (curve.segment_count() < 1) {
        throw Error(ErrorCode::InvalidArgument, "curve has no segments");
    }
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_schedules must be >= 1");
    }
    if (!(horizon > 0.0)) {
        throw Error(ErrorCode::InvalidHorizon, "horizon must be positive");
    }
}

std::pair<Vector, double> crossing_trial(const PolygonalCurve2D& curve, const ReactionNetwork& net,
                                         const RateBand& band, double horizon, std::uint64_t seed, int i,
                                         const CrossingOptions& opts)
{
    Rng rng(seed, static_cast<std::uint64_t>(i));
    Vector x0(2);
    int tries = 0;
    do {
        if (++tries > 10000) {
            throw Error(ErrorCode::InvalidArgument, "start box lies on the origin side of the curve");
        }
        for (int c = 0; c < 2; ++c) {
            x0[c] = std::pow(10.0, rng.uniform(opts.start_log10_lo, opts.start_log10_hi));
        }
    } while (!(signed_distance_to_curve(curve, x0) > 0.0));
    auto sched = RateSchedule::random(net.edge_count(), band, opts.switch_period, horizon, rng.bits());
    Trajectory traj = integrate(net, sched, x0, horizon, opts.integrate);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.states) {
        m = std::min(m, signed_distance_to_curve(curve, s));
    }
    return {x0, m};
}

CrossingReport collect(std::vector<std::pair<Vector, double>>&& r)
{
    CrossingReport rep;
    rep.min_signed_distance = std::numeric_limits<double>::infinity();
    for (auto& p : r) {
        rep.starts.push_back(std::move(p.first));
        rep.per_trajectory_min.push_back(p.second);
        rep.min_signed_distance = std::min(rep.min_signed_distance, p.second);
    }
    rep.trajectories = static_cast<long>(r.size());
    return rep;
}

} // namespace

CrossingReport trajectory_crossing_test(const PolygonalCurve2D& curve, const ReactionNetwork& net,
                                        const RateBand& band, int n_schedules, double horizon,
                                        std::uint64_t seed, const CrossingOptions& opts)
{
    check_crossing_args(curve, net, n_schedules, horizon);
    std::vector<std::pair<Vector, double>> r(static_cast<std::size_t>(n_schedules));
    bool failed = false;
    Error first(ErrorCode::InvalidArgument, "");
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n_schedules; ++i) {
        try {
            r[static_cast<std::size_t>(i)] = crossing_trial(curve, net, band, horizon, seed, i, opts);
        } catch (const Error& e) {
#pragma omp critical
            {
                if (!failed) {
                    failed = true;
                    first = e;
                }
            }
        }
    }
    if (failed) {
        throw first;
    }
    return collect(std::move(r));
}

CrossingReport trajectory_crossing_test_serial(const PolygonalCurve2D& curve, const ReactionNetwork& net,
                                               const RateBand& band, int n_schedules, double horizon,
                                               std::uint64_t seed, const CrossingOptions& opts)
{
    check_crossing_args(curve, net, n_schedules, horizon);
    std::vector<std::pair<Vector, double>> r;
    for (int i = 0; i < n_schedules; ++i) {
        r.push_back(crossing_trial(curve, net, band, horizon, seed, i, opts));
    }
    return collect(std::move(r));
}

std::string curve_to_svg(const PolygonalCurve2D& curve, const Arrangement& arr, double delta)
{
    require_planar(arr);
    double lo = -1.0, hi = 1.0;
    for (const auto& v : curve.vertices) {
        lo = std::min({lo, std::log(v[0]), std::log(v[1])});
        hi = std::max({hi, std::log(v[0]), std::log(v[1])});
    }
    lo = std::max(lo, std::log(curve.scale) - 6.0) - 1.0;
    hi += 1.0;
    const double span = hi - lo;
    const double px = 600.0 / span;
    auto sx = [&](double X) { return (X - lo) * px; };
    auto sy = [&](double Y) { return (hi - Y) * px; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n";
    os << "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
    os << "<line x1=\"" << sx(lo) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(hi) << "\" y2=\"" << sy(0)
       << "\" stroke=\"#999\"/>\n";
    os << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(lo) << "\" x2=\"" << sx(0) << "\" y2=\"" << sy(hi)
       << "\" stroke=\"#999\"/>\n";
    const double reach = 2.0 * span;
    for (const auto& h : arr.hyperplanes()) {
        double dx = -h.normal[1], dy = h.normal[0];
        os << "<line x1=\"" << sx(-reach * dx) << "\" y1=\"" << sy(-reach * dy) << "\" x2=\"" << sx(reach * dx)
           << "\" y2=\"" << sy(reach * dy) << "\" stroke=\"steelblue\" stroke-opacity=\"0.25\" stroke-width=\""
           << std::max(1.0, 2.0 * delta * px) << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"2\" points=\"";
    for (std::size_t s = 0; s < curve.segment_count(); ++s) {
        const Vector& a = curve.vertices[s];
        const Vector& b = curve.vertices[s + 1];
        for (int i = 0; i <= 50; ++i) {
            Vector z = a + (i / 50.0) * (b - a);
            os << sx(std::log(z[0])) << ',' << sy(std::log(z[1])) << ' ';
        }
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

} // namespace toric
