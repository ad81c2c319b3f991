// network.hpp: reaction networks as plain values.

#pragma once

#include <map>
#include <string>
#include <vector>

namespace crn {

/// Formal nonnegative-integer combination of species. Coefficients are keyed
/// by species index into the owning network; zero coefficients are never
/// stored, so the empty map is the zero complex "0".
struct Complex {
    std::map<int, long long> coeff;

    long long coefficient(int species) const {
        auto it = coeff.find(species);
        return it == coeff.end() ? 0 : it->second;
    }
    void add(int species, long long c);
    bool is_zero() const { return coeff.empty(); }
    bool operator==(const Complex& o) const { return coeff == o.coeff; }
    bool operator!=(const Complex& o) const { return !(*this == o); }
};

/// Ordered pair of complexes. Identical source and target, and duplicate
/// reactions within a network, are both permitted.
struct Reaction {
    Complex source;
    Complex target;

    bool operator==(const Reaction& o) const {
        return source == o.source && target == o.target;
    }
    bool operator!=(const Reaction& o) const { return !(*this == o); }
};

struct ReactionNetwork {
    std::vector<std::string> species;
    std::vector<Reaction> reactions;

    int species_count() const { return static_cast<int>(species.size()); }
    int reaction_count() const { return static_cast<int>(reactions.size()); }

    /// Index of a species name, or -1 if absent.
    int species_index(const std::string& name) const;

    /// Appends a species; throws std::invalid_argument on duplicates.
    int add_species(const std::string& name);

    bool operator==(const ReactionNetwork& o) const {
        return species == o.species && reactions == o.reactions;
    }
    bool operator!=(const ReactionNetwork& o) const { return !(*this == o); }
};

/// Net stoichiometry columns: gamma[i][j] = target_j(i) - source_j(i).
std::vector<std::vector<long long>> stoichiometric_matrix(const ReactionNetwork& net);

/// True iff the network contains 0 -> X and X -> 0 for every species X.
bool is_fully_open(const ReactionNetwork& net);

/// Index of the first reaction equal to r, or -1.
int find_reaction(const ReactionNetwork& net, const Reaction& r);

}  // namespace crn
