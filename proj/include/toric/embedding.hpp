#pragma once

#include "toric/common.hpp"
#include "toric/dynamics.hpp"
#include "toric/geometry.hpp"
#include "toric/network.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace toric {

/// Certificate that a weakly reversible k-variable system with rates in
/// [epsilon, 1/epsilon] lives inside the toric differential inclusion given by
/// `arrangement` and `delta0`.
struct EmbeddingCertificate {
    Arrangement arrangement;
    double delta0 = 0.0;
    CycleCover cover;
    /// Band of the network rates.
    double epsilon = 1.0;
    /// Band of the per-cycle split rates k_e / m_e: epsilon / max multiplicity.
    double epsilon_split = 1.0;
};

/// 2 |ln epsilon| / |yp - y|.
double delta_for_edge(double epsilon, const Vector& y, const Vector& yp);

EmbeddingCertificate build_embedding(const ReactionNetwork& net, const RateBand& band);

/// Vertices of one cycle relabelled v_1..v_r by decreasing projection on w,
/// so (v_{l+1} - v_l) . w < 0.
struct CycleOrdering {
    std::vector<int> order;
    Vector w;
};

CycleOrdering cycle_ordering(const std::vector<int>& cycle, const ReactionNetwork& net, const Vector& w);

/// Rates of each cycle after dividing shared edges equally: result[c][l] is
/// the rate of the l-th edge of cycle c.
std::vector<Vector> split_rates(const CycleCover& cover, const Vector& rates);

/// Field of a single cycle: sum_l rate_l x^{v_l} (v_{l+1} - v_l).
Vector cycle_field(const std::vector<int>& cycle, const Vector& cycle_rates, const ReactionNetwork& net,
                   const Vector& x);

/// Coefficients Phi_1..Phi_{r-1} of the cycle field on the basis
/// (v_{l+1} - v_l) of the ordering.
Vector phi_coefficients(const std::vector<int>& cycle, const Vector& cycle_rates, const ReactionNetwork& net,
                        const Vector& x, const CycleOrdering& ordering);

/// sum_l Phi_l (v_{l+1} - v_l).
Vector reconstruct_from_phi(const Vector& phi, const ReactionNetwork& net, const CycleOrdering& ordering);

struct EmbeddingCheck {
    Membership membership;
    Vector field;
    Vector log_x;
    CellSignature cell;

    bool passed() const noexcept { return membership.contained; }
};

EmbeddingCheck verify_embedding_at(const EmbeddingCertificate& cert, const ReactionNetwork& net,
                                   const RateSchedule& schedule, double t, const Vector& x);

struct LogBox {
    double lo = -8.0;
    double hi = 8.0;
};

/// Replay data for one failed trial: Rng(seed, trial) regenerates X and k.
struct EmbeddingWitness {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    Vector X;
    Vector rates;
    Vector field;
    Vector farkas;
    double residual = 0.0;
};

struct EmbeddingSampleReport {
    long trials = 0;
    long passed = 0;
    std::vector<EmbeddingWitness> failures;

    bool all_passed() const noexcept { return passed == trials; }
};

/// Draws for trial i come from Rng(seed, i): X uniform in the box, rates
/// log-uniform in [eps, 1/eps]. Trials run in parallel; failures are reported
/// in trial order, so the report does not depend on the thread count.
EmbeddingSampleReport sample_verify_embedding(const EmbeddingCertificate& cert, const ReactionNetwork& net,
                                              const RateBand& band, long trials, const LogBox& box,
                                              std::uint64_t seed);
/// Single-threaded reference for the above.
EmbeddingSampleReport sample_verify_embedding_serial(const EmbeddingCertificate& cert,
                                                     const ReactionNetwork& net, const RateBand& band,
                                                     long trials, const LogBox& box, std::uint64_t seed);

/// Regenerates the inputs of one trial.
void embedding_trial_inputs(const ReactionNetwork& net, const RateBand& band, const LogBox& box,
                            std::uint64_t seed, std::uint64_t trial, Vector& X, Vector& rates);

/// Inputs of one adversarial attempt: X uniform in the box, then moved along
/// a random hyperplane normal to land just outside that band (|n.X| uniform in
/// [delta0, 3 delta0]); every rate at one end of the band. Rng(seed, attempt).
void adversarial_inputs(const EmbeddingCertificate& cert, const ReactionNetwork& net, const RateBand& band,
                        const LogBox& box, std::uint64_t seed, std::uint64_t attempt, Vector& X, Vector& rates);

/// Searches for a point where the field escapes the certificate's inclusion
/// cone, concentrating on the band edges where an undersized delta0 fails.
/// Returns the first failing attempt, replayable with adversarial_inputs.
std::optional<EmbeddingWitness> search_embedding_violation(const EmbeddingCertificate& cert,
                                                           const ReactionNetwork& net, const RateBand& band,
                                                           long attempts, const LogBox& box, std::uint64_t seed);

} // namespace toric
