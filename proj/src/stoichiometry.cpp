#include "crn/stoichiometry.hpp"

#include <stdexcept>

namespace crn {

Eigen::MatrixXd to_eigen(const std::vector<std::vector<long long>>& m, int cols_if_empty) {
    int r = static_cast<int>(m.size());
    int c = r == 0 ? cols_if_empty : static_cast<int>(m[0].size());
    Eigen::MatrixXd e(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) e(i, j) = static_cast<double>(m[i][j]);
    return e;
}

Eigen::MatrixXd to_eigen(const RatMat& m) {
    Eigen::MatrixXd e(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) e(i, j) = m.at(i, j).to_double();
    return e;
}

StoichiometricStructure stoichiometric_structure(const ReactionNetwork& net) {
    StoichiometricStructure s;
    s.gamma = stoichiometric_matrix(net);
    int n = net.species_count();
    int r0 = net.reaction_count();

    RatMat g = RatMat::from_int(s.gamma);
    if (n == 0) g.cols = r0;  // keep the shape honest for species-free nets
    RatMat reduced = g;
    s.rank = rref(reduced, &s.gamma0_cols);

    s.gamma0.assign(n, std::vector<long long>(s.rank, 0));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < s.rank; ++c) s.gamma0[i][c] = s.gamma[i][s.gamma0_cols[c]];

    // Q from the pivot rows of Gamma0: Gamma0 restricted there is square and
    // nonsingular, and every column of Gamma lies in im Gamma0, so the row-
    // restricted solve determines Q globally. Verified exactly below.
    RatMat g0 = RatMat::from_int(s.gamma0);
    if (n == 0) g0.cols = s.rank;
    std::vector<int> prows = pivot_rows_by_columns(g0);
    if (static_cast<int>(prows.size()) != s.rank)
        throw std::logic_error("stoichiometric_structure: pivot column rank mismatch");
    RatMat g0p(s.rank, s.rank), gp(s.rank, r0);
    for (int i = 0; i < s.rank; ++i)
        for (int j = 0; j < s.rank; ++j) g0p.at(i, j) = Rat(s.gamma0[prows[i]][j]);
    for (int i = 0; i < s.rank; ++i)
        for (int j = 0; j < r0; ++j) gp.at(i, j) = Rat(s.gamma[prows[i]][j]);
    s.q = s.rank == 0 ? RatMat(0, r0) : mat_mul(inverse(g0p), gp);

    if (!(mat_mul(g0, s.q) == g))
        throw std::logic_error("stoichiometric_structure: Gamma0*Q != Gamma");

    s.conservation = integer_left_nullspace(s.gamma);
    // n x 0 Gamma (no reactions): left null space is all of R^n.
    if (r0 == 0 && n > 0) {
        s.conservation.assign(n, std::vector<long long>(n, 0));
        for (int i = 0; i < n; ++i) s.conservation[i][i] = 1;
    }

    s.gamma_d = to_eigen(s.gamma, r0);
    s.gamma0_d = to_eigen(s.gamma0, s.rank);
    s.q_d = to_eigen(s.q);
    s.conservation_d = to_eigen(s.conservation, n);
    if (s.conservation.empty()) s.conservation_d.resize(0, n);
    return s;
}

}  // namespace crn
