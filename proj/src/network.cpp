#include "crn/network.hpp"

#include <stdexcept>

namespace crn {

void Complex::add(int species, long long c) {
    if (c < 0) throw std::invalid_argument("Complex::add: negative stoichiometry");
    if (c == 0) return;
    coeff[species] += c;
}

int ReactionNetwork::species_index(const std::string& name) const {
    for (size_t i = 0; i < species.size(); ++i)
        if (species[i] == name) return static_cast<int>(i);
    return -1;
}

int ReactionNetwork::add_species(const std::string& name) {
    if (species_index(name) >= 0)
        throw std::invalid_argument("duplicate species name: " + name);
    species.push_back(name);
    return static_cast<int>(species.size()) - 1;
}

std::vector<std::vector<long long>> stoichiometric_matrix(const ReactionNetwork& net) {
    int n = net.species_count();
    int r0 = net.reaction_count();
    std::vector<std::vector<long long>> g(n, std::vector<long long>(r0, 0));
    for (int j = 0; j < r0; ++j) {
        for (const auto& [s, c] : net.reactions[j].target.coeff) g[s][j] += c;
        for (const auto& [s, c] : net.reactions[j].source.coeff) g[s][j] -= c;
    }
    return g;
}

bool is_fully_open(const ReactionNetwork& net) {
    for (int i = 0; i < net.species_count(); ++i) {
        Complex xi;
        xi.add(i, 1);
        Reaction in{Complex{}, xi};
        Reaction out{xi, Complex{}};
        if (find_reaction(net, in) < 0 || find_reaction(net, out) < 0) return false;
    }
    return true;
}

int find_reaction(const ReactionNetwork& net, const Reaction& r) {
    for (int j = 0; j < net.reaction_count(); ++j)
        if (net.reactions[j] == r) return j;
    return -1;
}

}  // namespace crn
