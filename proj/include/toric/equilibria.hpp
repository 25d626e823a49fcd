#pragma once

#include "toric/common.hpp"
#include "toric/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace toric {

/// Positive kernel vector of each linkage class's flow Laplacian. K[i] is the
/// weighted count of spanning trees of i's class directed toward i.
struct TreeConstants {
    Vector K;
    Partition classes;
};

enum class TreeMethod { Automatic, Enumeration, Determinant };

/// Classes with more than this many complexes use the minor-determinant path
/// under TreeMethod::Automatic.
inline constexpr int kTreeEnumerationLimit = 8;

TreeConstants tree_constants(const ReactionNetwork& net, const Vector& rates,
                             TreeMethod method = TreeMethod::Automatic);

/// Entry for vertex j: inflow into j minus outflow out of j at x0.
Vector vertex_balance_residual(const ReactionNetwork& net, const Vector& rates, const Vector& x0);

bool is_detailed_balanced(const ReactionNetwork& net, const Vector& rates, const Vector& x0,
                          double rel_tol = 1e-9);

enum class EquilibriumMethod { Provided, TreeSolve };

struct EquilibriumReport {
    std::optional<Vector> x0;
    Vector residual;
    EquilibriumMethod method = EquilibriumMethod::TreeSolve;
    double max_residual = 0.0;
};

std::string to_string(EquilibriumMethod m);

/// Rates divided by their maximum; residual thresholds are applied to these.
Vector normalized_rates(const Vector& rates);

/// Log-linear solve of x^{y_i} = c_class * K_i (minimum-norm), accepted only
/// if the vertex-balance residual at exp(X), with normalized rates, is <= tol.
EquilibriumReport solve_complex_balanced(const ReactionNetwork& net, const Vector& rates,
                                         double tol = 1e-10);

/// Horn-Jackson function sum_i x_i (ln x_i - ln x0_i - 1) + x0_i.
double lyapunov_value(const Vector& x, const Vector& x0);
Vector lyapunov_gradient(const Vector& x, const Vector& x0);
/// grad V(x) . f(x) with f the mass-action field.
double lyapunov_derivative(const ReactionNetwork& net, const Vector& rates, const Vector& x,
                           const Vector& x0);

struct BirchResult {
    Vector point;
    double kkt_residual = 0.0;
    int iterations = 0;
};

/// Minimizer of V(.; x0) over (x_ref + S0) intersected with the positive
/// orthant. Solved as the dual problem x = x0 * exp(W mu), W spanning S0-perp,
/// with damped Newton on mu.
BirchResult birch_point(const ReactionNetwork& net, const Vector& x0, const Vector& x_ref);
/// Solves complex balance first; throws NoComplexBalance if none exists.
BirchResult birch_point(const ReactionNetwork& net, const Vector& rates, const Vector& x_ref,
                        double tol);

} // namespace toric
