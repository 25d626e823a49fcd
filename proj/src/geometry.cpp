#include "toric/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace toric {

Hyperplane Hyperplane::from_normal(const Vector& n)
{
    double len = n.norm();
    if (!(len > 0.0) || !std::isfinite(len)) {
        throw Error(ErrorCode::InvalidArgument, "hyperplane normal must be a nonzero finite vector");
    }
    return {n / len};
}

int Arrangement::find(const Vector& n) const
{
    Vector u = n.normalized();
    for (std::size_t i = 0; i < planes_.size(); ++i) {
        if (std::abs(planes_[i].normal.dot(u)) >= 1.0 - 1e-12) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

int Arrangement::add(const Vector& n)
{
    if (dim_ == 0 && planes_.empty()) {
        dim_ = static_cast<int>(n.size());
    }
    require_dimension(n.size(), dim_, "hyperplane normal");
    if (int i = find(n); i >= 0) {
        return i;
    }
    planes_.push_back(Hyperplane::from_normal(n));
    return size() - 1;
}

ConeGenerators::ConeGenerators(int dimension, std::vector<Vector> generators)
    : dim(dimension), gens(std::move(generators))
{
    std::vector<Vector> kept;
    for (auto& g : gens) {
        require_dimension(g.size(), dim, "cone generator");
        if (!g.allFinite()) {
            throw Error(ErrorCode::InvalidArgument, "cone generators must be finite");
        }
        if (g.norm() > 0.0) {
            kept.push_back(std::move(g));
        }
    }
    gens = std::move(kept);
}

Matrix ConeGenerators::as_matrix() const
{
    Matrix G(dim, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j) {
        G.col(static_cast<Eigen::Index>(j)) = gens[j];
    }
    return G;
}

bool CellSignature::in_some_band() const
{
    return std::any_of(signs.begin(), signs.end(), [](int s) { return s == 0; });
}

// -------------------------------------------------------------
// NNLS and membership
// -------------------------------------------------------------

Vector nnls(const Matrix& G, const Vector& v)
{
    const Eigen::Index m = G.cols();
    Vector lambda = Vector::Zero(m);
    if (m == 0) {
        return lambda;
    }
    std::vector<bool> passive(static_cast<std::size_t>(m), false);
    const double tol = 1e-14 * std::max(1.0, G.norm()) * std::max(1.0, v.norm());

    auto solve_passive = [&]() {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (passive[static_cast<std::size_t>(j)]) {
                idx.push_back(j);
            }
        }
        Matrix Gp(G.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            Gp.col(static_cast<Eigen::Index>(k)) = G.col(idx[k]);
        }
        Vector sp = Gp.completeOrthogonalDecomposition().solve(v);
        Vector s = Vector::Zero(m);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            s[idx[k]] = sp[static_cast<Eigen::Index>(k)];
        }
        return s;
    };

    const int max_outer = static_cast<int>(3 * m + 10);
    for (int outer = 0; outer < max_outer; ++outer) {
        Vector w = G.transpose() * (v - G * lambda);
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        }
        if (best < 0) {
            break;
        }
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner < max_outer; ++inner) {
            Vector s = solve_passive();
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < m; ++j) {
                if (passive[static_cast<std::size_t>(j)] && s[j] <= 0.0) {
                    double denom = lambda[j] - s[j];
                    double a = denom > 0.0 ? lambda[j] / denom : 0.0;
                    alpha = std::min(alpha, a);
                }
            }
            if (!std::isfinite(alpha)) {
                lambda = s;
                break;
            }
            lambda += alpha * (s - lambda);
            for (Eigen::Index j = 0; j < m; ++j) {
                if (passive[static_cast<std::size_t>(j)] && lambda[j] <= 1e-15 * std::max(1.0, lambda.norm())) {
                    passive[static_cast<std::size_t>(j)] = false;
                    lambda[j] = 0.0;
                }
            }
        }
    }
    return lambda.cwiseMax(0.0);
}

Membership cone_contains(const ConeGenerators& cone, const Vector& v, double tol)
{
    require_dimension(v.size(), cone.dim, "membership probe");
    Membership out;
    Matrix G = cone.as_matrix();
    out.lambda = nnls(G, v);
    Vector r = v - G * out.lambda;
    out.residual = r.norm();
    out.contained = out.residual <= tol * std::max(1.0, v.norm());
    if (!out.contained) {
        out.farkas = r / out.residual;
    }
    return out;
}

bool cone_subset(const ConeGenerators& inner, const ConeGenerators& outer, double tol)
{
    return std::all_of(inner.gens.begin(), inner.gens.end(),
                       [&](const Vector& g) { return cone_contains(outer, g, tol).contained; });
}

double point_to_cone_distance(const ConeGenerators& cone, const Vector& X)
{
    require_dimension(X.size(), cone.dim, "point");
    if (cone.is_zero_cone()) {
        return X.norm();
    }
    Matrix G = cone.as_matrix();
    return (X - G * nnls(G, X)).norm();
}

// -------------------------------------------------------------
// Polar cone by double description
// -------------------------------------------------------------

namespace {

int constraint_rank(const std::vector<Vector>& rows, int n)
{
    if (rows.empty()) {
        return 0;
    }
    Matrix A(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(A);
    qr.setThreshold(1e-9);
    return static_cast<int>(qr.rank());
}

} // namespace

ConeGenerators polar_cone(const ConeGenerators& cone)
{
    const int n = cone.dim;
    if (n > kMaxPolarDimension) {
        throw Error(ErrorCode::DimensionTooLarge,
                    "polar cone limited to dimension " + std::to_string(kMaxPolarDimension));
    }
    constexpr double eps = 1e-10;

    std::vector<Vector> lineality;
    for (int i = 0; i < n; ++i) {
        lineality.push_back(Vector::Unit(n, i));
    }
    std::vector<Vector> rays;
    std::vector<Vector> processed; // constraint normals a with a.v <= 0

    for (const Vector& g : cone.gens) {
        const Vector a = g.normalized();

        // Constraint cuts the lineality space: trade one lineality direction for a ray.
        std::size_t pivot = lineality.size();
        double best = eps;
        for (std::size_t i = 0; i < lineality.size(); ++i) {
            double d = std::abs(a.dot(lineality[i]));
            if (d > best) {
                best = d;
                pivot = i;
            }
        }
        if (pivot < lineality.size()) {
            Vector l0 = lineality[pivot];
            double al0 = a.dot(l0);
            std::vector<Vector> next_lin;
            for (std::size_t i = 0; i < lineality.size(); ++i) {
                if (i == pivot) continue;
                Vector l = lineality[i] - (a.dot(lineality[i]) / al0) * l0;
                if (l.norm() > eps) {
                    next_lin.push_back(l.normalized());
                }
            }
            for (auto& r : rays) {
                r = (r - (a.dot(r) / al0) * l0).normalized();
            }
            rays.push_back((al0 > 0.0 ? -l0 : l0).normalized());
            lineality = std::move(next_lin);
            processed.push_back(a);
            continue;
        }

        std::vector<Vector> keep, pos, neg;
        for (const auto& r : rays) {
            double s = a.dot(r);
            if (s > eps) {
                pos.push_back(r);
            } else {
                keep.push_back(r);
                if (s < -eps) {
                    neg.push_back(r);
                }
            }
        }
        const int target_rank = n - static_cast<int>(lineality.size()) - 2;
        auto tight = [&](const Vector& r) {
            std::vector<bool> z;
            for (const auto& c : processed) {
                z.push_back(std::abs(c.dot(r)) <= eps);
            }
            return z;
        };
        for (const auto& p : pos) {
            auto zp = tight(p);
            for (const auto& q : neg) {
                auto zq = tight(q);
                std::vector<Vector> common;
                for (std::size_t i = 0; i < processed.size(); ++i) {
                    if (zp[i] && zq[i]) {
                        common.push_back(processed[i]);
                    }
                }
                if (constraint_rank(common, n) != target_rank) {
                    continue;
                }
                Vector z = a.dot(p) * q - a.dot(q) * p;
                if (z.norm() > eps) {
                    keep.push_back(z.normalized());
                }
            }
        }
        rays = std::move(keep);
        processed.push_back(a);
    }

    // Deduplicate rays.
    std::vector<Vector> unique;
    for (const auto& r : rays) {
        bool dup = std::any_of(unique.begin(), unique.end(),
                               [&](const Vector& u) { return (u - r).norm() <= 1e-9; });
        if (!dup) {
            unique.push_back(r);
        }
    }
    std::vector<Vector> out;
    for (const auto& l : lineality) {
        out.push_back(l);
        out.push_back(-l);
    }
    // Drop rays implied by the others (a ray in the cone of the remaining generators).
    for (std::size_t i = 0; i < unique.size(); ++i) {
        std::vector<Vector> others = out;
        for (std::size_t j = 0; j < unique.size(); ++j) {
            if (j != i) {
                others.push_back(unique[j]);
            }
        }
        if (!cone_contains(ConeGenerators(n, others), unique[i], 1e-9).contained) {
            out.push_back(unique[i]);
        } else {
            unique.erase(unique.begin() + static_cast<std::ptrdiff_t>(i));
            --i;
        }
    }
    return ConeGenerators(n, std::move(out));
}

// -------------------------------------------------------------
// Cells and inclusion cones
// -------------------------------------------------------------

CellSignature locate_cell(const Arrangement& arr, const Vector& X, double delta)
{
    if (delta < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "delta must be nonnegative");
    }
    require_dimension(X.size(), arr.dimension(), "point");
    CellSignature sig;
    for (const auto& h : arr.hyperplanes()) {
        double d = h.signed_distance(X);
        sig.signs.push_back(std::abs(d) < delta || d == 0.0 ? 0 : (d > 0.0 ? 1 : -1));
    }
    return sig;
}

ConeGenerators inclusion_cone(const Arrangement& arr, double delta, const Vector& X)
{
    CellSignature sig = locate_cell(arr, X, delta);
    std::vector<Vector> gens;
    for (int j = 0; j < arr.size(); ++j) {
        const Vector& nrm = arr[j].normal;
        int s = sig.signs[static_cast<std::size_t>(j)];
        if (s == 0) {
            gens.push_back(nrm);
            gens.push_back(-nrm);
        } else {
            gens.push_back(-static_cast<double>(s) * nrm);
        }
    }
    return ConeGenerators(arr.dimension(), std::move(gens));
}

ConeGenerators fan_inclusion_cone(const Fan& fan, double delta, const Vector& X)
{
    if (delta < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "delta must be nonnegative");
    }
    const int n = static_cast<int>(X.size());
    std::vector<Vector> gens;
    for (const auto& c : fan) {
        if (point_to_cone_distance(c, X) < delta || (delta == 0.0 && point_to_cone_distance(c, X) == 0.0)) {
            auto polar = polar_cone(c);
            gens.insert(gens.end(), polar.gens.begin(), polar.gens.end());
        }
    }
    return ConeGenerators(n, std::move(gens));
}

Fan enumerate_face_fan(const Arrangement& arr)
{
    const int h = arr.size();
    const int n = arr.dimension();
    Fan fan;
    std::vector<int> sigma(static_cast<std::size_t>(h), -1);
    while (true) {
        // Cone {X : sigma_j n_j.X >= 0} is the polar of {-sigma_j n_j, +-n_k}.
        std::vector<Vector> polar_gens;
        for (int j = 0; j < h; ++j) {
            int s = sigma[static_cast<std::size_t>(j)];
            if (s == 0) {
                polar_gens.push_back(arr[j].normal);
                polar_gens.push_back(-arr[j].normal);
            } else {
                polar_gens.push_back(-static_cast<double>(s) * arr[j].normal);
            }
        }
        fan.push_back(polar_cone(ConeGenerators(n, std::move(polar_gens))));
        int j = 0;
        for (; j < h; ++j) {
            if (++sigma[static_cast<std::size_t>(j)] <= 1) {
                break;
            }
            sigma[static_cast<std::size_t>(j)] = -1;
        }
        if (j == h) {
            break;
        }
    }
    return fan;
}

} // namespace toric
