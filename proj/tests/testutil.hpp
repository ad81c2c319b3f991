// Shared helpers for the test suites: deterministic random networks and
// models, an independent fraction-free rank oracle, finite differences.

#pragma once

#include <Eigen/Core>
#include <random>
#include <string>
#include <vector>

#include "crn/kinetics.hpp"
#include "crn/network.hpp"

namespace testutil {

using Rng = std::mt19937_64;

inline crn::Complex random_complex(Rng& rng, int n_species, int max_terms = 3,
                                   long long max_coeff = 4) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> species(0, n_species - 1);
    std::uniform_int_distribution<long long> coeff(1, max_coeff);
    crn::Complex c;
    int t = nterms(rng);
    for (int i = 0; i < t; ++i) c.add(species(rng), coeff(rng));
    return c;
}

/// Random network within the fuzz envelope: n <= 8 species, r0 <= 10
/// reactions, stoichiometries <= 4. Duplicate reactions, self-loops and
/// isolated species are all allowed.
inline crn::ReactionNetwork random_network(Rng& rng, int max_species = 8,
                                           int max_reactions = 10) {
    std::uniform_int_distribution<int> ns(1, max_species);
    std::uniform_int_distribution<int> nr(1, max_reactions);
    crn::ReactionNetwork net;
    int n = ns(rng);
    for (int i = 0; i < n; ++i) net.species.push_back("S" + std::to_string(i));
    int r = nr(rng);
    for (int j = 0; j < r; ++j)
        net.reactions.push_back({random_complex(rng, n), random_complex(rng, n)});
    return net;
}

inline Eigen::VectorXd random_positive(Rng& rng, int n, double lo = 0.2, double hi = 3.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = u(rng);
    return x;
}

inline crn::KineticModel random_model(Rng& rng, int max_species = 8, int max_reactions = 10) {
    crn::ReactionNetwork net = random_network(rng, max_species, max_reactions);
    return crn::KineticModel::make(net, random_positive(rng, net.reaction_count(), 0.3, 2.5));
}

/// Independent rank oracle: Bareiss fraction-free elimination over exact
/// integers (no rationals involved).
inline int bareiss_rank(std::vector<std::vector<long long>> m) {
    int rows = static_cast<int>(m.size());
    int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
    std::vector<std::vector<__int128>> a(rows, std::vector<__int128>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a[i][j] = m[i][j];
    __int128 prev = 1;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int i = rank; i < rows; ++i)
            if (a[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        for (int i = rank + 1; i < rows; ++i) {
            for (int j = col + 1; j < cols; ++j)
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

/// Central finite differences of the mass-action rate vector.
inline Eigen::MatrixXd fd_rate_jacobian(const crn::KineticModel& model, const Eigen::VectorXd& x,
                                        double rel_step = 1e-6) {
    Eigen::MatrixXd j(model.reaction_count(), model.species_count());
    for (int i = 0; i < x.size(); ++i) {
        double h = rel_step * x(i);
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        j.col(i) = (crn::rate_vector(model, xp) - crn::rate_vector(model, xm)) / (2.0 * h);
    }
    return j;
}

}  // namespace testutil
