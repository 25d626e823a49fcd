#include "toric/equilibria.hpp"
#include "toric/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace toric {

namespace {

struct ClassEdge {
    int from; // local index
    int to;
    double rate;
};

// Sum over in-trees rooted at each local vertex of the product of edge weights.
// Every non-root vertex picks one out-edge; the choice is a tree iff every
// vertex reaches the root.
Vector enumerate_in_trees(int m, const std::vector<ClassEdge>& edges)
{
    std::vector<std::vector<int>> out(static_cast<std::size_t>(m));
    for (std::size_t e = 0; e < edges.size(); ++e) {
        out[static_cast<std::size_t>(edges[e].from)].push_back(static_cast<int>(e));
    }
    Vector K = Vector::Zero(m);
    std::vector<int> next(static_cast<std::size_t>(m), -1);

    for (int root = 0; root < m; ++root) {
        std::vector<int> others;
        for (int v = 0; v < m; ++v) {
            if (v != root) {
                others.push_back(v);
            }
        }
        bool feasible = std::all_of(others.begin(), others.end(),
                                    [&](int v) { return !out[static_cast<std::size_t>(v)].empty(); });
        if (!feasible) {
            continue;
        }
        std::vector<std::size_t> pos(others.size(), 0);
        while (true) {
            double w = 1.0;
            for (std::size_t i = 0; i < others.size(); ++i) {
                const auto& e = edges[static_cast<std::size_t>(out[static_cast<std::size_t>(others[i])][pos[i]])];
                next[static_cast<std::size_t>(others[i])] = e.to;
                w *= e.rate;
            }
            next[static_cast<std::size_t>(root)] = root;
            bool tree = true;
            for (int v : others) {
                int u = v;
                for (int steps = 0; steps < m && u != root; ++steps) {
                    u = next[static_cast<std::size_t>(u)];
                }
                if (u != root) {
                    tree = false;
                    break;
                }
            }
            if (tree) {
                K[root] += w;
            }
            // odometer increment
            std::size_t i = 0;
            for (; i < others.size(); ++i) {
                if (++pos[i] < out[static_cast<std::size_t>(others[i])].size()) {
                    break;
                }
                pos[i] = 0;
            }
            if (i == others.size()) {
                break;
            }
        }
    }
    return K;
}

// Matrix-tree theorem on the out-degree Laplacian: deleting row and column r
// leaves a matrix whose determinant is the weighted in-tree count at r.
Vector determinant_in_trees(int m, const std::vector<ClassEdge>& edges)
{
    Matrix L = Matrix::Zero(m, m);
    for (const auto& e : edges) {
        L(e.from, e.from) += e.rate;
        L(e.from, e.to) -= e.rate;
    }
    Vector K(m);
    for (int r = 0; r < m; ++r) {
        if (m == 1) {
            K[r] = 1.0;
            continue;
        }
        Matrix minor(m - 1, m - 1);
        for (int i = 0, ii = 0; i < m; ++i) {
            if (i == r) continue;
            for (int j = 0, jj = 0; j < m; ++j) {
                if (j == r) continue;
                minor(ii, jj++) = L(i, j);
            }
            ++ii;
        }
        K[r] = minor.partialPivLu().determinant();
    }
    return K;
}

double flux(const ReactionNetwork& net, const Vector& rates, int e, const Vector& x)
{
    return rates[e] * monomial(x, net.y(net.reactions()[e].source));
}

} // namespace

TreeConstants tree_constants(const ReactionNetwork& net, const Vector& rates, TreeMethod method)
{
    require_dimension(rates.size(), net.edge_count(), "rate vector");
    if (!is_weakly_reversible(net)) {
        throw Error(ErrorCode::NotWeaklyReversible, "tree constants require a weakly reversible network");
    }
    TreeConstants tc;
    tc.classes = linkage_classes(net);
    tc.K = Vector::Zero(net.complex_count());

    for (const auto& members : tc.classes.classes) {
        const int m = static_cast<int>(members.size());
        std::map<int, int> local;
        for (int i = 0; i < m; ++i) {
            local[members[static_cast<std::size_t>(i)]] = i;
        }
        std::vector<ClassEdge> edges;
        for (int e = 0; e < net.edge_count(); ++e) {
            const auto& r = net.reactions()[e];
            if (auto it = local.find(r.source); it != local.end()) {
                edges.push_back({it->second, local.at(r.target), rates[e]});
            }
        }
        bool enumerate = method == TreeMethod::Enumeration ||
                         (method == TreeMethod::Automatic && m <= kTreeEnumerationLimit);
        Vector K = enumerate ? enumerate_in_trees(m, edges) : determinant_in_trees(m, edges);
        for (int i = 0; i < m; ++i) {
            tc.K[members[static_cast<std::size_t>(i)]] = K[i];
        }
    }
    return tc;
}

Vector vertex_balance_residual(const ReactionNetwork& net, const Vector& rates, const Vector& x0)
{
    require_dimension(x0.size(), net.dimension(), "state");
    require_dimension(rates.size(), net.edge_count(), "rate vector");
    Vector res = Vector::Zero(net.complex_count());
    for (int e = 0; e < net.edge_count(); ++e) {
        const auto& r = net.reactions()[e];
        double f = flux(net, rates, e, x0);
        res[r.target] += f;
        res[r.source] -= f;
    }
    return res;
}

bool is_detailed_balanced(const ReactionNetwork& net, const Vector& rates, const Vector& x0, double rel_tol)
{
    require_dimension(x0.size(), net.dimension(), "state");
    require_dimension(rates.size(), net.edge_count(), "rate vector");
    if (!is_reversible(net)) {
        throw Error(ErrorCode::NotReversible, "detailed balance is defined for reversible networks only");
    }
    std::map<std::pair<int, int>, double> total;
    for (int e = 0; e < net.edge_count(); ++e) {
        const auto& r = net.reactions()[e];
        total[{r.source, r.target}] += flux(net, rates, e, x0);
    }
    for (const auto& [edge, forward] : total) {
        double backward = total.at({edge.second, edge.first});
        if (std::abs(forward - backward) > rel_tol * std::max(forward, backward)) {
            return false;
        }
    }
    return true;
}

std::string to_string(EquilibriumMethod m)
{
    return m == EquilibriumMethod::Provided ? "provided" : "tree_solve";
}

Vector normalized_rates(const Vector& rates)
{
    if (rates.size() == 0) {
        return rates;
    }
    return rates / rates.maxCoeff();
}

EquilibriumReport solve_complex_balanced(const ReactionNetwork& net, const Vector& rates, double tol)
{
    require_dimension(rates.size(), net.edge_count(), "rate vector");
    const Vector k = normalized_rates(rates);
    TreeConstants tc = tree_constants(net, k);
    if (!((tc.K.array() > 0.0).all() && tc.K.allFinite())) {
        throw Error(ErrorCode::SingularSystem, "tree constants are not all positive");
    }

    const int n = net.dimension();
    const int m = net.complex_count();
    const int classes = tc.classes.count();
    Matrix A = Matrix::Zero(m, n + classes);
    Vector rhs(m);
    for (int i = 0; i < m; ++i) {
        A.block(i, 0, 1, n) = net.y(i).transpose();
        A(i, n + tc.classes.class_of[static_cast<std::size_t>(i)]) = -1.0;
        rhs[i] = std::log(tc.K[i]);
    }
    // Minimum-norm least squares.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
    Vector sol = cod.solve(rhs);
    if (!sol.allFinite()) {
        throw Error(ErrorCode::SingularSystem, "log-linear solve produced non-finite values");
    }

    EquilibriumReport report;
    report.method = EquilibriumMethod::TreeSolve;
    Vector x0 = sol.head(n).array().exp();
    report.residual = vertex_balance_residual(net, k, x0);
    report.max_residual = report.residual.size() ? report.residual.cwiseAbs().maxCoeff() : 0.0;
    if (report.max_residual <= tol && (x0.array() > 0.0).all() && x0.allFinite()) {
        report.x0 = x0;
    }
    return report;
}

double lyapunov_value(const Vector& x, const Vector& x0)
{
    require_dimension(x.size(), x0.size(), "Lyapunov arguments");
    double v = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        v += x[i] * (std::log(x[i]) - std::log(x0[i]) - 1.0) + x0[i];
    }
    return v;
}

Vector lyapunov_gradient(const Vector& x, const Vector& x0)
{
    require_dimension(x.size(), x0.size(), "Lyapunov arguments");
    return (x.array().log() - x0.array().log()).matrix();
}

double lyapunov_derivative(const ReactionNetwork& net, const Vector& rates, const Vector& x, const Vector& x0)
{
    return lyapunov_gradient(x, x0).dot(mass_action_field(net, rates, x));
}

BirchResult birch_point(const ReactionNetwork& net, const Vector& x0, const Vector& x_ref)
{
    require_dimension(x0.size(), net.dimension(), "equilibrium");
    require_dimension(x_ref.size(), net.dimension(), "reference state");
    if (!((x_ref.array() > 0.0).all() && (x0.array() > 0.0).all())) {
        throw Error(ErrorCode::InvalidArgument, "Birch point needs positive x0 and x_ref");
    }
    const Matrix W = conservation_basis(net);
    const Vector b = W.transpose() * x_ref;
    const auto sub = stoichiometric_subspace(net);

    auto point = [&](const Vector& mu) -> Vector {
        return (x0.array() * (W * mu).array().exp()).matrix();
    };
    auto kkt = [&](const Vector& x) {
        double primal = (W.transpose() * x - b).norm();
        double stationarity =
            sub.dim ? (sub.basis.transpose() * (x.array().log() - x0.array().log()).matrix()).norm() : 0.0;
        return std::max(primal, stationarity);
    };

    BirchResult res;
    Vector mu = Vector::Zero(W.cols());
    Vector x = point(mu);
    if (W.cols() == 0) {
        res.point = x;
        res.kkt_residual = kkt(x);
        return res;
    }
    auto dual = [&](const Vector& m, const Vector& xm) { return xm.sum() - b.dot(m); };

    const double scale = std::max(1.0, b.norm());
    constexpr int kMaxIter = 200;
    for (int it = 0; it < kMaxIter; ++it) {
        Vector grad = W.transpose() * x - b;
        res.iterations = it;
        if (grad.norm() <= 1e-13 * scale) {
            break;
        }
        Matrix H = W.transpose() * x.asDiagonal() * W;
        Vector step = H.ldlt().solve(-grad);
        if (!step.allFinite()) {
            throw Error(ErrorCode::NewtonDivergence, "singular Hessian at iteration " + std::to_string(it));
        }
        double f0 = dual(mu, x);
        double slope = grad.dot(step);
        double t = 1.0;
        Vector mu_new, x_new;
        for (int ls = 0; ls < 60; ++ls) {
            mu_new = mu + t * step;
            x_new = point(mu_new);
            if (!x_new.allFinite()) {
                t *= 0.5;
                continue;
            }
            // close to the optimum the dual decrease drops below the rounding
            // of f0, so a strict drop in |grad| also accepts the step
            if (dual(mu_new, x_new) <= f0 + 1e-4 * t * slope ||
                (W.transpose() * x_new - b).norm() < (1.0 - 1e-4 * t) * grad.norm()) {
                break;
            }
            t *= 0.5;
        }
        if (!x_new.allFinite()) {
            throw Error(ErrorCode::NewtonDivergence, "iterate overflowed at iteration " + std::to_string(it) +
                                                         ", |grad|=" + std::to_string(grad.norm()));
        }
        if ((mu_new - mu).norm() == 0.0) {
            break; // no progress possible at machine precision
        }
        mu = mu_new;
        x = x_new;
        if (it == kMaxIter - 1) {
            throw Error(ErrorCode::NewtonDivergence,
                        "no convergence after " + std::to_string(kMaxIter) + " iterations, |grad|=" +
                            std::to_string((W.transpose() * x - b).norm()));
        }
    }
    res.point = x;
    res.kkt_residual = kkt(x);
    return res;
}

BirchResult birch_point(const ReactionNetwork& net, const Vector& rates, const Vector& x_ref, double tol)
{
    auto eq = solve_complex_balanced(net, rates, tol);
    if (!eq.x0) {
        throw Error(ErrorCode::NoComplexBalance,
                    "no complex-balanced equilibrium (max residual " + std::to_string(eq.max_residual) + ")");
    }
    return birch_point(net, *eq.x0, x_ref);
}

} // namespace toric
