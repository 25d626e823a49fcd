#pragma once

#include "toric/common.hpp"
#include "toric/network.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

namespace toric {

/// epsilon <= k <= 1/epsilon, 0 < epsilon <= 1.
struct RateBand {
    double epsilon = 1.0;

    explicit RateBand(double eps);

    double lower() const noexcept { return epsilon; }
    double upper() const noexcept { return 1.0 / epsilon; }
    bool contains(double k) const noexcept { return k >= lower() && k <= upper(); }
};

/// Piecewise-constant per-edge rates: segment i holds on
/// [breakpoints[i], breakpoints[i+1]), the last segment extends to infinity.
class RateSchedule {
public:
    static RateSchedule constant(const Vector& rates, std::optional<RateBand> band = std::nullopt);
    static RateSchedule piecewise(std::vector<double> breakpoints, std::vector<Vector> values,
                                  std::optional<RateBand> band = std::nullopt);
    /// i.i.d. log-uniform values on [eps, 1/eps], switching every `period`.
    static RateSchedule random(int edges, const RateBand& band, double period, double horizon,
                               std::uint64_t seed);

    Vector at(double t) const;
    int edge_count() const noexcept { return static_cast<int>(values_.front().size()); }
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<Vector>& values() const noexcept { return values_; }
    const std::optional<RateBand>& band() const noexcept { return band_; }

    /// First breakpoint strictly after t, or +inf.
    double next_breakpoint(double t) const;

private:
    std::vector<double> breakpoints_;
    std::vector<Vector> values_;
    std::optional<RateBand> band_;
};

/// Monomial x^y for positive x.
double monomial(const Vector& x, const Vector& y);

/// sum over edges y -> y' of k * x^y * (y' - y), accumulated in edge order.
Vector mass_action_field(const ReactionNetwork& net, const Vector& rates, const Vector& x);
/// Same, with rates read from the schedule at t. Throws RateOutOfBand when
/// the schedule carries a band and violates it.
Vector k_variable_field(const ReactionNetwork& net, const RateSchedule& schedule, double t,
                        const Vector& x);

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 1e-3;
    double min_step = 1e-14;
    double max_step = std::numeric_limits<double>::infinity();
    /// > 0 selects fixed steps of this size (no error control).
    double fixed_step = 0.0;
    /// > 0 records states on the uniform grid k * sample_dt; 0 records every step.
    double sample_dt = 0.0;
    long max_steps = 50'000'000;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    /// max over accepted steps of |P_perp(x(t) - x0)|.
    double conserved_residual = 0.0;
    long accepted_steps = 0;
    long rejected_steps = 0;

    std::size_t size() const noexcept { return times.size(); }
    const Vector& final_state() const { return states.back(); }
};

Trajectory integrate(const ReactionNetwork& net, const RateSchedule& schedule, const Vector& x0,
                     double t_end, const IntegrateOptions& opts = {});
Trajectory integrate(const ReactionNetwork& net, const Vector& x0, double t_end,
                     const IntegrateOptions& opts = {});

/// Per-coordinate minimum over the trailing `tail_fraction` of samples.
Vector persistence_metrics(const Trajectory& traj, double tail_fraction);

/// CSV with header t,x1,...,xn and %.17g values.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

} // namespace toric
