#include "toric/embedding.hpp"
#include "toric/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace toric {

double delta_for_edge(double epsilon, const Vector& y, const Vector& yp)
{
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1]");
    }
    require_dimension(yp.size(), y.size(), "edge endpoints");
    double len = (yp - y).norm();
    if (len == 0.0) {
        throw Error(ErrorCode::CoincidentVertices, "edge endpoints coincide");
    }
    return 2.0 * std::abs(std::log(epsilon)) / len;
}

EmbeddingCertificate build_embedding(const ReactionNetwork& net, const RateBand& band)
{
    EmbeddingCertificate cert;
    cert.cover = cycle_cover(net); // throws NotWeaklyReversible
    cert.arrangement = Arrangement(net.dimension());
    cert.epsilon = band.epsilon;
    const int m_max = std::max(1, cert.cover.max_multiplicity());
    cert.epsilon_split = band.epsilon / m_max;

    for (const auto& cyc : cert.cover.cycles) {
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            for (std::size_t j = i + 1; j < cyc.size(); ++j) {
                const Vector& yi = net.y(cyc[i]);
                const Vector& yj = net.y(cyc[j]);
                cert.arrangement.add(yi - yj);
                cert.delta0 = std::max(cert.delta0, delta_for_edge(cert.epsilon_split, yi, yj));
            }
        }
    }
    return cert;
}

CycleOrdering cycle_ordering(const std::vector<int>& cycle, const ReactionNetwork& net, const Vector& w)
{
    require_dimension(w.size(), net.dimension(), "ordering direction");
    std::vector<std::pair<double, int>> proj;
    double scale = w.norm();
    for (int v : cycle) {
        proj.emplace_back(net.y(v).dot(w), v);
        scale = std::max(scale, std::abs(proj.back().first));
    }
    std::sort(proj.begin(), proj.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 1; i < proj.size(); ++i) {
        if (proj[i - 1].first - proj[i].first <= 1e-12 * std::max(1.0, scale)) {
            throw Error(ErrorCode::TieOnProjection, "complexes " + std::to_string(proj[i - 1].second) + " and " +
                                                        std::to_string(proj[i].second) +
                                                        " project to the same point");
        }
    }
    CycleOrdering out;
    out.w = w;
    for (const auto& p : proj) {
        out.order.push_back(p.second);
    }
    return out;
}

std::vector<Vector> split_rates(const CycleCover& cover, const Vector& rates)
{
    std::vector<Vector> out;
    for (const auto& edges : cover.cycle_edges) {
        Vector k(static_cast<Eigen::Index>(edges.size()));
        for (std::size_t l = 0; l < edges.size(); ++l) {
            auto e = static_cast<std::size_t>(edges[l]);
            k[static_cast<Eigen::Index>(l)] = rates[edges[l]] / cover.multiplicity[e];
        }
        out.push_back(std::move(k));
    }
    return out;
}

Vector cycle_field(const std::vector<int>& cycle, const Vector& cycle_rates, const ReactionNetwork& net,
                   const Vector& x)
{
    const std::size_t r = cycle.size();
    require_dimension(cycle_rates.size(), static_cast<Eigen::Index>(r), "cycle rates");
    Vector f = Vector::Zero(net.dimension());
    for (std::size_t l = 0; l < r; ++l) {
        const Vector& ys = net.y(cycle[l]);
        const Vector& yt = net.y(cycle[(l + 1) % r]);
        f += (cycle_rates[static_cast<Eigen::Index>(l)] * monomial(x, ys)) * (yt - ys);
    }
    return f;
}

Vector phi_coefficients(const std::vector<int>& cycle, const Vector& cycle_rates, const ReactionNetwork& net,
                        const Vector& x, const CycleOrdering& ordering)
{
    const std::size_t r = cycle.size();
    require_dimension(cycle_rates.size(), static_cast<Eigen::Index>(r), "cycle rates");
    std::vector<int> a = cycle, b = ordering.order;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
        throw Error(ErrorCode::OrderingMismatch, "ordering is not a permutation of the cycle's vertices");
    }
    auto position = [&](int v) {
        return static_cast<int>(std::find(ordering.order.begin(), ordering.order.end(), v) - ordering.order.begin());
    };

    Vector phi = Vector::Zero(static_cast<Eigen::Index>(r) - 1);
    for (std::size_t l = 0; l < r; ++l) {
        int src = position(cycle[l]);
        int tgt = position(cycle[(l + 1) % r]);
        double term = cycle_rates[static_cast<Eigen::Index>(l)] * monomial(x, net.y(cycle[l]));
        if (src < tgt) {
            for (int i = src; i < tgt; ++i) phi[i] += term;
        } else {
            for (int i = tgt; i < src; ++i) phi[i] -= term;
        }
    }
    return phi;
}

Vector reconstruct_from_phi(const Vector& phi, const ReactionNetwork& net, const CycleOrdering& ordering)
{
    Vector f = Vector::Zero(net.dimension());
    for (Eigen::Index l = 0; l < phi.size(); ++l) {
        auto i = static_cast<std::size_t>(l);
        f += phi[l] * (net.y(ordering.order[i + 1]) - net.y(ordering.order[i]));
    }
    return f;
}

EmbeddingCheck verify_embedding_at(const EmbeddingCertificate& cert, const ReactionNetwork& net,
                                   const RateSchedule& schedule, double t, const Vector& x)
{
    require_dimension(x.size(), net.dimension(), "state");
    if (!((x.array() > 0.0).all())) {
        throw Error(ErrorCode::InvalidArgument, "state must be strictly positive");
    }
    Vector k = schedule.at(t);
    RateBand band(cert.epsilon);
    for (Eigen::Index e = 0; e < k.size(); ++e) {
        if (!band.contains(k[e])) {
            throw Error(ErrorCode::RateOutOfBand, "schedule leaves the certificate's rate band");
        }
    }
    EmbeddingCheck out;
    out.field = k_variable_field(net, schedule, t, x);
    out.log_x = x.array().log();
    out.cell = locate_cell(cert.arrangement, out.log_x, cert.delta0);
    out.membership = cone_contains(inclusion_cone(cert.arrangement, cert.delta0, out.log_x), out.field);
    return out;
}

void embedding_trial_inputs(const ReactionNetwork& net, const RateBand& band, const LogBox& box,
                            std::uint64_t seed, std::uint64_t trial, Vector& X, Vector& rates)
{
    Rng rng(seed, trial);
    X.resize(net.dimension());
    for (int i = 0; i < net.dimension(); ++i) {
        X[i] = rng.uniform(box.lo, box.hi);
    }
    rates.resize(net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e) {
        rates[e] = std::clamp(rng.log_uniform(band.lower(), band.upper()), band.lower(), band.upper());
    }
}

namespace {

std::optional<EmbeddingWitness> check_point(const EmbeddingCertificate& cert, const ReactionNetwork& net,
                                            const RateBand& band, const Vector& X, const Vector& k,
                                            std::uint64_t seed, std::uint64_t trial)
{
    auto schedule = RateSchedule::constant(k, band);
    Vector x = X.array().exp();
    auto check = verify_embedding_at(cert, net, schedule, 0.0, x);
    if (check.passed()) {
        return std::nullopt;
    }
    EmbeddingWitness w;
    w.seed = seed;
    w.trial = trial;
    w.X = X;
    w.rates = k;
    w.field = check.field;
    w.farkas = check.membership.farkas;
    w.residual = check.membership.residual;
    return w;
}

std::optional<EmbeddingWitness> run_trial(const EmbeddingCertificate& cert, const ReactionNetwork& net,
                                          const RateBand& band, const LogBox& box, std::uint64_t seed,
                                          std::uint64_t trial)
{
    Vector X, k;
    embedding_trial_inputs(net, band, box, seed, trial, X, k);
    return check_point(cert, net, band, X, k, seed, trial);
}

void check_sampling_args(const ReactionNetwork& net, const EmbeddingCertificate& cert, const RateBand& band,
                         long trials)
{
    if (!is_weakly_reversible(net)) {
        throw Error(ErrorCode::NotWeaklyReversible, "embedding harness requires a weakly reversible network");
    }
    if (trials < 1) {
        throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
    }
    if (band.epsilon < cert.epsilon) {
        throw Error(ErrorCode::RateOutOfBand, "sampling band is wider than the certificate's band");
    }
}

} // namespace

EmbeddingSampleReport sample_verify_embedding(const EmbeddingCertificate& cert, const ReactionNetwork& net,
                                              const RateBand& band, long trials, const LogBox& box,
                                              std::uint64_t seed)
{
    check_sampling_args(net, cert, band, trials);
    std::vector<std::optional<EmbeddingWitness>> results(static_cast<std::size_t>(trials));

#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < trials; ++i) {
        results[static_cast<std::size_t>(i)] = run_trial(cert, net, band, box, seed, static_cast<std::uint64_t>(i));
    }

    EmbeddingSampleReport report;
    report.trials = trials;
    for (auto& r : results) {
        if (r) {
            report.failures.push_back(std::move(*r));
        }
    }
    report.passed = trials - static_cast<long>(report.failures.size());
    return report;
}

EmbeddingSampleReport sample_verify_embedding_serial(const EmbeddingCertificate& cert,
                                                     const ReactionNetwork& net, const RateBand& band,
                                                     long trials, const LogBox& box, std::uint64_t seed)
{
    check_sampling_args(net, cert, band, trials);
    EmbeddingSampleReport report;
    report.trials = trials;
    for (long i = 0; i < trials; ++i) {
        if (auto w = run_trial(cert, net, band, box, seed, static_cast<std::uint64_t>(i))) {
            report.failures.push_back(std::move(*w));
        }
    }
    report.passed = trials - static_cast<long>(report.failures.size());
    return report;
}

void adversarial_inputs(const EmbeddingCertificate& cert, const ReactionNetwork& net, const RateBand& band,
                        const LogBox& box, std::uint64_t seed, std::uint64_t attempt, Vector& X, Vector& rates)
{
    Rng rng(seed, attempt);
    X.resize(net.dimension());
    for (int i = 0; i < net.dimension(); ++i) {
        X[i] = rng.uniform(box.lo, box.hi);
    }
    if (!cert.arrangement.empty()) {
        auto h = static_cast<int>(rng.uniform() * cert.arrangement.size());
        const Vector& n = cert.arrangement[std::min(h, cert.arrangement.size() - 1)].normal;
        double width = cert.delta0 > 0.0 ? cert.delta0 : 1.0;
        double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
        double offset = side * rng.uniform(cert.delta0, cert.delta0 + 2.0 * width);
        X += (offset - n.dot(X)) * n;
    }
    rates.resize(net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e) {
        rates[e] = rng.uniform() < 0.5 ? band.lower() : band.upper();
    }
}

std::optional<EmbeddingWitness> search_embedding_violation(const EmbeddingCertificate& cert,
                                                           const ReactionNetwork& net, const RateBand& band,
                                                           long attempts, const LogBox& box, std::uint64_t seed)
{
    check_sampling_args(net, cert, band, attempts);
    for (long i = 0; i < attempts; ++i) {
        Vector X, k;
        adversarial_inputs(cert, net, band, box, seed, static_cast<std::uint64_t>(i), X, k);
        if (auto w = check_point(cert, net, band, X, k, seed, static_cast<std::uint64_t>(i))) {
            return w;
        }
    }
    return std::nullopt;
}

} // namespace toric
