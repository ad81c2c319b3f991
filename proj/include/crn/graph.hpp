// graph.hpp: the Petri net graph of a network and graph-level relations
// (isomorphism, vertex-induced subnetwork). Backtracking searches with
// multiset pruning; exponential worst case accepted at desk scale.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "crn/network.hpp"

namespace crn {

struct SizeLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Edge-weighted bipartite digraph: arcs species -> reaction carry the source
/// stoichiometry, arcs reaction -> species the product stoichiometry. An arc
/// exists iff the corresponding stoichiometry is nonzero.
struct PetriNetGraph {
    struct Arc {
        int species;
        int reaction;
        long long weight;
        bool species_to_reaction;  // reactant arc if true, product arc if false
    };
    int species_vertices = 0;
    int reaction_vertices = 0;
    std::vector<Arc> arcs;
};

PetriNetGraph petri_net_graph(const ReactionNetwork& net);

/// Witness for is_isomorphic: bijections from a's indices to b's.
struct IsoWitness {
    std::vector<int> species_map;
    std::vector<int> reaction_map;
};

/// Witness for is_induced_subnetwork: injections from sub's indices into sup's.
struct Embedding {
    std::vector<int> species_map;
    std::vector<int> reaction_map;
};

/// Bipartition-preserving, weight-preserving digraph isomorphism of the two
/// PN graphs. Intended for desk scale; throws SizeLimitError beyond it.
std::optional<IsoWitness> is_isomorphic(const ReactionNetwork& a, const ReactionNetwork& b);

/// True iff PN(sub) can be obtained from PN(sup) by deleting species and
/// reaction vertices (with incident arcs), up to isomorphism.
std::optional<Embedding> is_induced_subnetwork(const ReactionNetwork& sub,
                                               const ReactionNetwork& sup);

}  // namespace crn
