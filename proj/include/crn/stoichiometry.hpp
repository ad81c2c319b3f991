// stoichiometry.hpp: exact stoichiometric structure of a network.

#pragma once

#include <Eigen/Core>
#include <vector>

#include "crn/network.hpp"
#include "crn/rational.hpp"

namespace crn {

/// Gamma and its exact factorization Gamma = Gamma0 * Q, where Gamma0 holds
/// the pivot columns of Gamma under leftmost-pivot elimination, plus a
/// primitive integer basis of the left null space (the conservation rows).
/// All identities hold exactly; the _d members are floating copies.
struct StoichiometricStructure {
    std::vector<std::vector<long long>> gamma;         // n x r0
    int rank = 0;                                      // r
    std::vector<int> gamma0_cols;                      // pivot columns of gamma
    std::vector<std::vector<long long>> gamma0;        // n x r
    RatMat q;                                          // r x r0, exact
    std::vector<std::vector<long long>> conservation;  // (n-r) x n

    Eigen::MatrixXd gamma_d;
    Eigen::MatrixXd gamma0_d;
    Eigen::MatrixXd q_d;
    Eigen::MatrixXd conservation_d;

    int species_count() const { return static_cast<int>(gamma.size()); }
    int reaction_count() const {
        return gamma.empty() ? 0 : static_cast<int>(gamma[0].size());
    }
};

StoichiometricStructure stoichiometric_structure(const ReactionNetwork& net);

Eigen::MatrixXd to_eigen(const std::vector<std::vector<long long>>& m, int cols_if_empty = 0);
Eigen::MatrixXd to_eigen(const RatMat& m);

}  // namespace crn
