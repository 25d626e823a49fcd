#pragma once

#include "toric/common.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace toric {

/// A vertex of the embedded reaction graph. `y` is the exponent vector of the
/// monomial x^y; entries may be non-integer (power-law kinetics).
struct Complex {
    int id = 0;
    Vector y;
};

struct Reaction {
    int source = 0;
    int target = 0;
    double rate = 1.0;
};

/// Geometrically embedded digraph with rated edges. Complexes are unique by
/// their y vector; reactions keep insertion order, which fixes the floating
/// evaluation order of every vector field built from the network.
class ReactionNetwork {
public:
    ReactionNetwork() = default;
    explicit ReactionNetwork(std::vector<std::string> species);

    const std::vector<std::string>& species() const noexcept { return species_; }
    const std::vector<Complex>& complexes() const noexcept { return complexes_; }
    const std::vector<Reaction>& reactions() const noexcept { return reactions_; }

    int dimension() const noexcept { return static_cast<int>(species_.size()); }
    int complex_count() const noexcept { return static_cast<int>(complexes_.size()); }
    int edge_count() const noexcept { return static_cast<int>(reactions_.size()); }

    const Vector& y(int complex_id) const { return complexes_.at(complex_id).y; }

    /// Returns the id of the complex with vector `y`, adding it if new.
    int add_complex(const Vector& y);
    /// Returns -1 when no complex has vector `y`.
    int find_complex(const Vector& y) const;

    void add_reaction(int source, int target, double rate);
    /// Convenience for tests and examples.
    void add_reaction(const Vector& source, const Vector& target, double rate);

    Vector rates() const;
    ReactionNetwork with_rates(const Vector& rates) const;

private:
    std::vector<std::string> species_;
    std::vector<Complex> complexes_;
    std::vector<Reaction> reactions_;
};

ReactionNetwork parse_network(std::string_view text);
ReactionNetwork load_network(const std::string& path);
std::string serialize_network(const ReactionNetwork& net);

struct StoichiometricSubspace {
    Matrix basis; // n x s, orthonormal columns
    int dim = 0;

    /// Projection of v onto the orthogonal complement of the subspace.
    Vector project_off(const Vector& v) const;
};

StoichiometricSubspace stoichiometric_subspace(const ReactionNetwork& net);

/// Orthonormal basis (n x (n-s)) of the orthogonal complement of S0.
Matrix conservation_basis(const ReactionNetwork& net);

struct Partition {
    std::vector<int> class_of;
    std::vector<std::vector<int>> classes;

    int count() const noexcept { return static_cast<int>(classes.size()); }
};

/// Strongly connected components (Tarjan); classes listed in order of
/// discovery of their smallest vertex id.
Partition strongly_connected_components(const ReactionNetwork& net);
/// Weakly connected components. Isolated complexes form their own class.
Partition linkage_classes(const ReactionNetwork& net);

bool is_weakly_reversible(const ReactionNetwork& net);
bool is_reversible(const ReactionNetwork& net);

/// m - l - s.
int deficiency(const ReactionNetwork& net);

struct CycleCover {
    /// Vertex sequences v_1..v_r; the closing edge v_r -> v_1 is implicit.
    std::vector<std::vector<int>> cycles;
    /// cycle_edges[c][l] is the reaction index of v_l -> v_{l+1 mod r}.
    std::vector<std::vector<int>> cycle_edges;
    /// Number of cycles containing each reaction (indexed like reactions()).
    std::vector<int> multiplicity;

    int max_multiplicity() const;
};

/// Covers every edge by a directed cycle: for each uncovered edge u -> v, a
/// shortest path v -> u (BFS) closes it. Edges may be shared between cycles.
CycleCover cycle_cover(const ReactionNetwork& net);

} // namespace toric
