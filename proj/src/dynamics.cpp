#include "toric/dynamics.hpp"
#include "toric/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace toric {

RateBand::RateBand(double eps) : epsilon(eps)
{
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1]");
    }
}

// -------------------------------------------------------------
// RateSchedule
// -------------------------------------------------------------

namespace {

void check_band(const Vector& k, const std::optional<RateBand>& band)
{
    if (!band) {
        return;
    }
    for (Eigen::Index e = 0; e < k.size(); ++e) {
        if (!band->contains(k[e])) {
            throw Error(ErrorCode::RateOutOfBand, "rate " + std::to_string(k[e]) + " on edge " +
                                                      std::to_string(e) + " outside [" +
                                                      std::to_string(band->lower()) + ", " +
                                                      std::to_string(band->upper()) + "]");
        }
    }
}

} // namespace

RateSchedule RateSchedule::constant(const Vector& rates, std::optional<RateBand> band)
{
    return piecewise({0.0}, {rates}, band);
}

RateSchedule RateSchedule::piecewise(std::vector<double> breakpoints, std::vector<Vector> values,
                                     std::optional<RateBand> band)
{
    if (breakpoints.empty() || breakpoints.size() != values.size()) {
        throw Error(ErrorCode::InvalidArgument, "schedule needs one value vector per breakpoint");
    }
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i] > breakpoints[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "schedule breakpoints must increase");
        }
    }
    for (const auto& v : values) {
        require_dimension(v.size(), values.front().size(), "schedule value vector");
        if (!((v.array() > 0.0).all() && v.allFinite())) {
            throw Error(ErrorCode::InvalidArgument, "schedule rates must be positive");
        }
    }
    RateSchedule s;
    s.breakpoints_ = std::move(breakpoints);
    s.values_ = std::move(values);
    s.band_ = band;
    return s;
}

RateSchedule RateSchedule::random(int edges, const RateBand& band, double period, double horizon,
                                  std::uint64_t seed)
{
    if (!(period > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "switch period must be positive");
    }
    Rng rng(seed);
    std::vector<double> bps;
    std::vector<Vector> vals;
    for (double t = 0.0; t < horizon || bps.empty(); t += period) {
        Vector k(edges);
        for (int e = 0; e < edges; ++e) {
            k[e] = std::clamp(rng.log_uniform(band.lower(), band.upper()), band.lower(), band.upper());
        }
        bps.push_back(t);
        vals.push_back(std::move(k));
    }
    return piecewise(std::move(bps), std::move(vals), band);
}

Vector RateSchedule::at(double t) const
{
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    std::size_t idx = it == breakpoints_.begin() ? 0 : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return values_[idx];
}

double RateSchedule::next_breakpoint(double t) const
{
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return it == breakpoints_.end() ? std::numeric_limits<double>::infinity() : *it;
}

// -------------------------------------------------------------
// Vector fields
// -------------------------------------------------------------

double monomial(const Vector& x, const Vector& y)
{
    double m = 1.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] == 1.0) {
            m *= x[i];
        } else if (y[i] != 0.0) {
            m *= std::pow(x[i], y[i]);
        }
    }
    return m;
}

Vector mass_action_field(const ReactionNetwork& net, const Vector& rates, const Vector& x)
{
    require_dimension(x.size(), net.dimension(), "state");
    require_dimension(rates.size(), net.edge_count(), "rate vector");
    Vector f = Vector::Zero(net.dimension());
    for (int e = 0; e < net.edge_count(); ++e) {
        const auto& r = net.reactions()[e];
        const Vector& ys = net.y(r.source);
        f += (rates[e] * monomial(x, ys)) * (net.y(r.target) - ys);
    }
    return f;
}

Vector k_variable_field(const ReactionNetwork& net, const RateSchedule& schedule, double t, const Vector& x)
{
    Vector k = schedule.at(t);
    check_band(k, schedule.band());
    return mass_action_field(net, k, x);
}

// -------------------------------------------------------------
// Integrator (Cash-Karp 4(5), 4th-order solution propagated)
// -------------------------------------------------------------

namespace {

struct StepResult {
    Vector x4;
    Vector err;
    bool positive = true;
};

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 3.0 / 10, a42 = -9.0 / 10, a43 = 6.0 / 5;
constexpr double a51 = -11.0 / 54, a52 = 5.0 / 2, a53 = -70.0 / 27, a54 = 35.0 / 27;
constexpr double a61 = 1631.0 / 55296, a62 = 175.0 / 512, a63 = 575.0 / 13824, a64 = 44275.0 / 110592,
                 a65 = 253.0 / 4096;
constexpr double b1 = 37.0 / 378, b3 = 250.0 / 621, b4 = 125.0 / 594, b6 = 512.0 / 1771;
constexpr double d1 = 2825.0 / 27648, d3 = 18575.0 / 48384, d4 = 13525.0 / 55296, d5 = 277.0 / 14336,
                 d6 = 1.0 / 4;

class Stepper {
public:
    Stepper(const ReactionNetwork& net, const RateSchedule& schedule) : net_(net), schedule_(schedule) {}

    // The schedule is constant on [t, t+h) because steps never cross breakpoints.
    StepResult step(double t, const Vector& x, double h) const
    {
        StepResult out;
        Vector k = schedule_.at(t);
        check_band(k, schedule_.band());
        auto f = [&](const Vector& z) { return mass_action_field(net_, k, z); };
        auto positive = [](const Vector& z) { return (z.array() > 0.0).all() && z.allFinite(); };

        Vector k1 = f(x);
        Vector z = x + h * a21 * k1;
        if (!positive(z)) return fail();
        Vector k2 = f(z);
        z = x + h * (a31 * k1 + a32 * k2);
        if (!positive(z)) return fail();
        Vector k3 = f(z);
        z = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
        if (!positive(z)) return fail();
        Vector k4 = f(z);
        z = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        if (!positive(z)) return fail();
        Vector k5 = f(z);
        z = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        if (!positive(z)) return fail();
        Vector k6 = f(z);

        Vector x5 = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b6 * k6);
        out.x4 = x + h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
        out.err = x5 - out.x4;
        out.positive = positive(out.x4);
        return out;
    }

private:
    static StepResult fail()
    {
        StepResult r;
        r.positive = false;
        return r;
    }

    const ReactionNetwork& net_;
    const RateSchedule& schedule_;
};

} // namespace

Trajectory integrate(const ReactionNetwork& net, const RateSchedule& schedule, const Vector& x0,
                     double t_end, const IntegrateOptions& opts)
{
    require_dimension(x0.size(), net.dimension(), "initial state");
    require_dimension(schedule.edge_count(), net.edge_count(), "schedule edges");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw Error(ErrorCode::InvalidHorizon, "t_end must be positive and finite");
    }
    if (!((x0.array() > 0.0).all() && x0.allFinite())) {
        throw Error(ErrorCode::InvalidArgument, "initial state must be strictly positive");
    }

    const Matrix cons = conservation_basis(net);
    const Vector c0 = cons.transpose() * x0;

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(x0);

    Stepper stepper(net, schedule);
    double t = 0.0;
    Vector x = x0;
    const bool fixed = opts.fixed_step > 0.0;
    double h = fixed ? opts.fixed_step : std::min(opts.initial_step, opts.max_step);
    long sample_index = 1;
    long steps = 0;

    while (t < t_end) {
        if (++steps > opts.max_steps) {
            throw Error(ErrorCode::StepSizeUnderflow, "step budget exhausted at t=" + std::to_string(t));
        }
        double limit = std::min(t_end, schedule.next_breakpoint(t));
        bool on_sample = false;
        if (opts.sample_dt > 0.0) {
            double ts = static_cast<double>(sample_index) * opts.sample_dt;
            if (ts <= limit) {
                limit = ts;
                on_sample = true;
            }
        }
        double h_try = std::min(fixed ? opts.fixed_step : h, limit - t);
        bool hits_limit = h_try >= limit - t;

        StepResult r = stepper.step(t, x, h_try);
        if (!r.positive) {
            ++traj.rejected_steps;
            h = 0.5 * h_try;
            if (h < opts.min_step) {
                throw Error(ErrorCode::StepSizeUnderflow,
                            "positivity guard forced step below min_step at t=" + std::to_string(t));
            }
            continue;
        }

        double err_norm = 0.0;
        if (!fixed) {
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                double sc = opts.atol + opts.rtol * std::max(std::abs(x[i]), std::abs(r.x4[i]));
                err_norm = std::max(err_norm, std::abs(r.err[i]) / sc);
            }
            if (err_norm > 1.0) {
                ++traj.rejected_steps;
                h = h_try * std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
                if (h < opts.min_step) {
                    throw Error(ErrorCode::StepSizeUnderflow,
                                "error control forced step below min_step at t=" + std::to_string(t));
                }
                continue;
            }
        }

        t = hits_limit ? limit : t + h_try;
        x = r.x4;
        ++traj.accepted_steps;
        traj.conserved_residual =
            std::max(traj.conserved_residual, (cons.transpose() * x - c0).norm());

        if (opts.sample_dt > 0.0) {
            if (hits_limit && on_sample) {
                traj.times.push_back(t);
                traj.states.push_back(x);
                ++sample_index;
            } else if (t >= t_end) {
                traj.times.push_back(t);
                traj.states.push_back(x);
            }
        } else {
            traj.times.push_back(t);
            traj.states.push_back(x);
        }

        if (!fixed) {
            double grow = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
            // Keep the untruncated step size when the step was cut short by a limit.
            double base = hits_limit ? std::max(h, h_try) : h_try;
            h = std::min(opts.max_step, base * std::clamp(grow, 0.2, 5.0));
        }
    }
    return traj;
}

Trajectory integrate(const ReactionNetwork& net, const Vector& x0, double t_end, const IntegrateOptions& opts)
{
    return integrate(net, RateSchedule::constant(net.rates()), x0, t_end, opts);
}

Vector persistence_metrics(const Trajectory& traj, double tail_fraction)
{
    if (traj.states.empty()) {
        throw Error(ErrorCode::EmptyTrajectory, "trajectory has no samples");
    }
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "tail_fraction must lie in (0, 1]");
    }
    const std::size_t n = traj.states.size();
    auto count = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
    count = std::clamp<std::size_t>(count, 1, n);
    Vector mins = traj.states[n - count];
    for (std::size_t i = n - count; i < n; ++i) {
        mins = mins.cwiseMin(traj.states[i]);
    }
    return mins;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out)
{
    const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
    out << "t";
    for (Eigen::Index i = 0; i < n; ++i) {
        out << ",x" << (i + 1);
    }
    out << "\n";
    char buf[40];
    for (std::size_t s = 0; s < traj.size(); ++s) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.times[s]);
        out << buf;
        for (Eigen::Index i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", traj.states[s][i]);
            out << buf;
        }
        out << "\n";
    }
}

} // namespace toric
