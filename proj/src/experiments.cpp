#include "toric/experiments.hpp"
#include "toric/equilibria.hpp"
#include "toric/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace toric {

void ExperimentConfig::validate() const
{
    if (!(horizon > 0.0)) {
        throw Error(ErrorCode::InvalidHorizon, "horizon must be positive");
    }
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1]");
    }
    if (initial_conditions.empty() && samples < 1) {
        throw Error(ErrorCode::InvalidArgument, "no initial conditions");
    }
    if (!(box_lo > 0.0 && box_hi >= box_lo)) {
        throw Error(ErrorCode::InvalidArgument, "sampling box must satisfy 0 < lo <= hi");
    }
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "tail_fraction must lie in (0, 1]");
    }
}

std::vector<Vector> initial_conditions(const ExperimentConfig& cfg, int dimension)
{
    if (!cfg.initial_conditions.empty()) {
        for (const auto& x : cfg.initial_conditions) {
            require_dimension(x.size(), dimension, "initial condition");
        }
        return cfg.initial_conditions;
    }
    std::vector<Vector> out;
    for (int i = 0; i < cfg.samples; ++i) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
        Vector x(dimension);
        for (int c = 0; c < dimension; ++c) {
            x[c] = rng.log_uniform(cfg.box_lo, cfg.box_hi);
        }
        out.push_back(std::move(x));
    }
    return out;
}

bool ConvergenceReport::all_converged() const
{
    return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.converged; });
}

bool ConvergenceReport::all_lyapunov_ok() const
{
    return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.lyapunov_ok; });
}

bool ConvergenceReport::all_persistent() const
{
    return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.persistent; });
}

bool ConvergenceReport::any_error() const
{
    return std::any_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.error.empty(); });
}

bool ConvergenceReport::passed() const
{
    if (outcomes.empty() || any_error()) {
        return false;
    }
    if (kind == "persistence") {
        return all_persistent() && all_lyapunov_ok();
    }
    return all_converged() && all_lyapunov_ok();
}

namespace {

Vector require_toric(const ReactionNetwork& net, const ExperimentConfig& cfg)
{
    cfg.validate();
    if (!is_weakly_reversible(net)) {
        throw Error(ErrorCode::NotWeaklyReversible, "experiment requires a weakly reversible network");
    }
    auto eq = solve_complex_balanced(net, net.rates(), cfg.equilibrium_tol);
    if (!eq.x0) {
        throw Error(ErrorCode::NoComplexBalance, "network has no complex-balanced equilibrium");
    }
    return *eq.x0;
}

TrajectoryOutcome run_one(const ReactionNetwork& net, const ExperimentConfig& cfg, const Vector& x0,
                          const Vector& xi, std::size_t index)
{
    TrajectoryOutcome o;
    o.index = index;
    o.initial = xi;
    try {
        o.birch = birch_point(net, x0, xi).point;
        Trajectory traj = integrate(net, xi, cfg.horizon, cfg.integrate);
        o.final_state = traj.final_state();
        o.steps = traj.accepted_steps;
        o.final_distance = (o.final_state - o.birch).norm();

        o.max_lyapunov_increase = -std::numeric_limits<double>::infinity();
        double prev = lyapunov_value(traj.states.front(), x0);
        for (std::size_t i = 1; i < traj.states.size(); ++i) {
            double v = lyapunov_value(traj.states[i], x0);
            o.max_lyapunov_increase = std::max(o.max_lyapunov_increase, v - prev);
            prev = v;
        }
        if (traj.states.size() < 2) {
            o.max_lyapunov_increase = 0.0;
        }
        o.persistence_min = persistence_metrics(traj, cfg.tail_fraction);
        o.persistence_floor = cfg.persistence_fraction * o.birch.minCoeff();

        o.converged = o.final_distance <= cfg.position_tol;
        o.lyapunov_ok = o.max_lyapunov_increase <= cfg.lyapunov_slack;
        o.persistent = (o.persistence_min.array() >= o.persistence_floor).all();
    } catch (const Error& e) {
        o.error = e.what();
    }
    return o;
}

ConvergenceReport run(const ReactionNetwork& net, const ExperimentConfig& cfg, const char* kind, bool parallel)
{
    Vector x0 = require_toric(net, cfg);
    auto ics = initial_conditions(cfg, net.dimension());
    ConvergenceReport rep;
    rep.kind = kind;
    rep.equilibrium = x0;
    rep.outcomes.resize(ics.size());
    const long n = static_cast<long>(ics.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < n; ++i) {
            auto k = static_cast<std::size_t>(i);
            rep.outcomes[k] = run_one(net, cfg, x0, ics[k], k);
        }
    } else {
        for (long i = 0; i < n; ++i) {
            auto k = static_cast<std::size_t>(i);
            rep.outcomes[k] = run_one(net, cfg, x0, ics[k], k);
        }
    }
    return rep;
}

} // namespace

ConvergenceReport run_persistence_experiment(const ReactionNetwork& net, const ExperimentConfig& cfg)
{
    return run(net, cfg, "persistence", true);
}

ConvergenceReport run_global_attractor_experiment(const ReactionNetwork& net, const ExperimentConfig& cfg)
{
    return run(net, cfg, "global_attractor", true);
}

ConvergenceReport run_global_attractor_experiment_serial(const ReactionNetwork& net, const ExperimentConfig& cfg)
{
    return run(net, cfg, "global_attractor", false);
}

Vector lyapunov_sweep_point(int dimension, double lo, double hi, std::uint64_t seed, long i)
{
    Rng rng(seed, static_cast<std::uint64_t>(i));
    Vector x(dimension);
    for (int c = 0; c < dimension; ++c) {
        x[c] = rng.log_uniform(lo, hi);
    }
    return x;
}

namespace {

void check_sweep(const ReactionNetwork& net, const Vector& x0, long points, double lo, double hi)
{
    require_dimension(x0.size(), net.dimension(), "equilibrium");
    if (points < 1) {
        throw Error(ErrorCode::InvalidArgument, "points must be >= 1");
    }
    if (!(lo > 0.0 && hi >= lo)) {
        throw Error(ErrorCode::InvalidArgument, "sweep box must satisfy 0 < lo <= hi");
    }
}

LyapunovSweep reduce(const std::vector<double>& d, int dim, double lo, double hi, std::uint64_t seed)
{
    LyapunovSweep s;
    s.points = static_cast<long>(d.size());
    auto it = std::max_element(d.begin(), d.end());
    s.max_derivative = *it;
    s.argmax = lyapunov_sweep_point(dim, lo, hi, seed, it - d.begin());
    return s;
}

} // namespace

LyapunovSweep lyapunov_sweep(const ReactionNetwork& net, const Vector& rates, const Vector& x0, long points,
                             double lo, double hi, std::uint64_t seed)
{
    check_sweep(net, x0, points, lo, hi);
    std::vector<double> d(static_cast<std::size_t>(points));
#pragma omp parallel for schedule(static)
    for (long i = 0; i < points; ++i) {
        d[static_cast<std::size_t>(i)] =
            lyapunov_derivative(net, rates, lyapunov_sweep_point(net.dimension(), lo, hi, seed, i), x0);
    }
    return reduce(d, net.dimension(), lo, hi, seed);
}

LyapunovSweep lyapunov_sweep_serial(const ReactionNetwork& net, const Vector& rates, const Vector& x0,
                                    long points, double lo, double hi, std::uint64_t seed)
{
    check_sweep(net, x0, points, lo, hi);
    std::vector<double> d;
    for (long i = 0; i < points; ++i) {
        d.push_back(lyapunov_derivative(net, rates, lyapunov_sweep_point(net.dimension(), lo, hi, seed, i), x0));
    }
    return reduce(d, net.dimension(), lo, hi, seed);
}

} // namespace toric
