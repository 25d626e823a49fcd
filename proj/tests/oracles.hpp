#pragma once

// Brute-force references used to cross-check the library. Nothing here calls
// into toric beyond plain data accessors.

#include "toric/network.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace oracle {

using toric::Matrix;
using toric::Vector;

/// Gaussian elimination with partial pivoting.
inline int rank(Matrix a, double tol = 1e-9)
{
    int r = 0;
    const int rows = static_cast<int>(a.rows());
    for (int c = 0; c < a.cols() && r < rows; ++c) {
        int piv = r;
        for (int i = r + 1; i < rows; ++i) {
            if (std::abs(a(i, c)) > std::abs(a(piv, c))) {
                piv = i;
            }
        }
        if (std::abs(a(piv, c)) <= tol) {
            continue;
        }
        a.row(r).swap(a.row(piv));
        for (int i = r + 1; i < rows; ++i) {
            a.row(i) -= a(i, c) / a(r, c) * a.row(r);
        }
        ++r;
    }
    return r;
}

/// Reaction vectors y' - y as columns.
inline Matrix reaction_vectors(const toric::ReactionNetwork& net)
{
    Matrix m(net.dimension(), net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e) {
        const auto& r = net.reactions()[static_cast<std::size_t>(e)];
        m.col(e) = net.y(r.target) - net.y(r.source);
    }
    return m;
}

inline int stoichiometric_rank(const toric::ReactionNetwork& net)
{
    return net.edge_count() == 0 ? 0 : rank(reaction_vectors(net));
}

/// reach[i][j]: j reachable from i (Floyd-Warshall closure).
inline std::vector<std::vector<bool>> reachability(const toric::ReactionNetwork& net)
{
    const auto m = static_cast<std::size_t>(net.complex_count());
    std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
    for (std::size_t i = 0; i < m; ++i) {
        reach[i][i] = true;
    }
    for (const auto& r : net.reactions()) {
        reach[static_cast<std::size_t>(r.source)][static_cast<std::size_t>(r.target)] = true;
    }
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (reach[i][k] && reach[k][j]) {
                    reach[i][j] = true;
                }
            }
        }
    }
    return reach;
}

/// Number of weakly connected components (union-find).
inline int linkage_class_count(const toric::ReactionNetwork& net)
{
    std::vector<int> parent(static_cast<std::size_t>(net.complex_count()));
    for (std::size_t i = 0; i < parent.size(); ++i) {
        parent[i] = static_cast<int>(i);
    }
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const auto& r : net.reactions()) {
        parent[static_cast<std::size_t>(find(r.source))] = find(r.target);
    }
    int count = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) {
        count += find(static_cast<int>(i)) == static_cast<int>(i);
    }
    return count;
}

/// Sum over spanning in-trees rooted at `root`, within the component of
/// `root`, of the product of edge rates. Every non-root vertex picks one
/// outgoing edge; the choice is a tree iff every walk reaches the root.
inline double in_tree_sum(const toric::ReactionNetwork& net, const Vector& rates, int root)
{
    auto reach = reachability(net);
    std::vector<int> members;
    for (int v = 0; v < net.complex_count(); ++v) {
        // undirected component of root; weak reversibility is assumed
        if (reach[static_cast<std::size_t>(v)][static_cast<std::size_t>(root)] ||
            reach[static_cast<std::size_t>(root)][static_cast<std::size_t>(v)]) {
            members.push_back(v);
        }
    }
    std::vector<std::vector<int>> out(static_cast<std::size_t>(net.complex_count()));
    for (int e = 0; e < net.edge_count(); ++e) {
        out[static_cast<std::size_t>(net.reactions()[static_cast<std::size_t>(e)].source)].push_back(e);
    }
    std::vector<int> others;
    for (int v : members) {
        if (v != root) {
            others.push_back(v);
        }
    }
    std::vector<int> choice(static_cast<std::size_t>(net.complex_count()), -1);
    double total = 0.0;
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
        if (idx == others.size()) {
            for (int v : others) {
                int cur = v;
                for (std::size_t step = 0; step <= others.size() && cur != root; ++step) {
                    cur = net.reactions()[static_cast<std::size_t>(choice[static_cast<std::size_t>(cur)])].target;
                }
                if (cur != root) {
                    return;
                }
            }
            double w = 1.0;
            for (int v : others) {
                w *= rates[choice[static_cast<std::size_t>(v)]];
            }
            total += w;
            return;
        }
        int v = others[idx];
        for (int e : out[static_cast<std::size_t>(v)]) {
            choice[static_cast<std::size_t>(v)] = e;
            rec(idx + 1);
        }
    };
    rec(0);
    return total;
}

/// Central differences with step h * max(1, |x_i|).
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h = 1e-6)
{
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double step = h * std::max(1.0, std::abs(x[i]));
        Vector a = x, b = x;
        a[i] += step;
        b[i] -= step;
        g[i] = (f(a) - f(b)) / (2.0 * step);
    }
    return g;
}

/// Minimizer of a unimodal f on [a, b].
inline double golden_section(const std::function<double(double)>& f, double a, double b, int iters = 200)
{
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// min over t >= 0 on a dense grid of |X - t * ray|.
inline double ray_distance_grid(const Vector& ray, const Vector& X, double t_max, int n = 200001)
{
    double best = X.norm();
    for (int i = 0; i < n; ++i) {
        double t = t_max * i / (n - 1);
        best = std::min(best, (X - t * ray).norm());
    }
    return best;
}

inline std::vector<std::string> corpus_files(const std::string& dir)
{
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() == ".crn") {
            out.push_back(e.path().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace oracle
