#pragma once

#include "toric/common.hpp"
#include "toric/dynamics.hpp"
#include "toric/network.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace toric {

struct ExperimentConfig {
    std::string network_path;
    double epsilon = 1.0;
    double horizon = 50.0;

    /// Used verbatim when nonempty; otherwise `samples` points are drawn
    /// log-uniformly from [box_lo, box_hi]^n with Rng(seed, i).
    std::vector<Vector> initial_conditions;
    int samples = 20;
    double box_lo = 0.1;
    double box_hi = 10.0;
    std::uint64_t seed = 1;

    double position_tol = 1e-6;
    double lyapunov_slack = 1e-9;
    /// Persistence floor as a fraction of the smallest Birch coordinate.
    double persistence_fraction = 0.5;
    double tail_fraction = 0.2;
    double equilibrium_tol = 1e-10;

    std::string output_dir;
    IntegrateOptions integrate{};

    void validate() const;
};

std::vector<Vector> initial_conditions(const ExperimentConfig& cfg, int dimension);

struct TrajectoryOutcome {
    std::size_t index = 0;
    Vector initial;
    Vector final_state;
    Vector birch;
    double final_distance = 0.0;
    /// Largest V(t_{i+1}) - V(t_i) over consecutive recorded states; signed.
    double max_lyapunov_increase = 0.0;
    Vector persistence_min;
    double persistence_floor = 0.0;
    long steps = 0;

    bool converged = false;
    bool lyapunov_ok = false;
    bool persistent = false;
    /// Nonempty when integration or the Birch solve threw.
    std::string error;
};

struct ConvergenceReport {
    std::string kind;
    Vector equilibrium;
    std::vector<TrajectoryOutcome> outcomes;

    bool all_converged() const;
    bool all_lyapunov_ok() const;
    bool all_persistent() const;
    bool any_error() const;
    /// Criterion of the experiment that produced the report.
    bool passed() const;
};

/// Integrates every initial condition and measures trailing-window minima
/// against the floor, plus Lyapunov monotonicity. Requires a weakly
/// reversible network with a complex-balanced equilibrium.
ConvergenceReport run_persistence_experiment(const ReactionNetwork& net, const ExperimentConfig& cfg);
/// Compares x(horizon) with the Birch point of each initial condition's class.
ConvergenceReport run_global_attractor_experiment(const ReactionNetwork& net, const ExperimentConfig& cfg);
/// Single-threaded reference for both experiments.
ConvergenceReport run_global_attractor_experiment_serial(const ReactionNetwork& net, const ExperimentConfig& cfg);

struct LyapunovSweep {
    long points = 0;
    double max_derivative = 0.0;
    Vector argmax;
};

/// dV/dt at `points` samples drawn log-uniformly from [lo, hi]^n.
LyapunovSweep lyapunov_sweep(const ReactionNetwork& net, const Vector& rates, const Vector& x0, long points,
                             double lo, double hi, std::uint64_t seed);
LyapunovSweep lyapunov_sweep_serial(const ReactionNetwork& net, const Vector& rates, const Vector& x0,
                                    long points, double lo, double hi, std::uint64_t seed);

/// Sample i of the sweep.
Vector lyapunov_sweep_point(int dimension, double lo, double hi, std::uint64_t seed, long i);

} // namespace toric
