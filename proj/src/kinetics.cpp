#include "crn/kinetics.hpp"

#include <Eigen/LU>
#include <cmath>

#include "crn/eig.hpp"

namespace crn {

namespace {

double ipow(double x, long long e) {
    double out = 1.0;
    while (e > 0) {
        if (e & 1) out *= x;
        x *= x;
        e >>= 1;
    }
    return out;
}

double binomial_count(int n, int r) {
    double c = 1.0;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
}

}  // namespace

KineticModel KineticModel::make(const ReactionNetwork& net, const Eigen::VectorXd& k) {
    if (k.size() != net.reaction_count())
        throw std::invalid_argument("KineticModel: rate constant count != reaction count");
    for (int j = 0; j < k.size(); ++j)
        if (!(k(j) > 0.0))
            throw std::invalid_argument("KineticModel: rate constants must be strictly positive");
    KineticModel m;
    m.net = net;
    m.structure = stoichiometric_structure(net);
    m.k = k;
    m.source.resize(static_cast<size_t>(net.reaction_count()));
    for (int j = 0; j < net.reaction_count(); ++j)
        for (const auto& [s, c] : net.reactions[j].source.coeff)
            m.source[static_cast<size_t>(j)].emplace_back(s, c);
    return m;
}

Eigen::VectorXd vecd(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

Eigen::VectorXd vecd(const std::vector<double>& values) {
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

void require_positive(const Eigen::VectorXd& x, const char* who) {
    for (int i = 0; i < x.size(); ++i)
        if (!(x(i) > 0.0))
            throw std::invalid_argument(std::string(who) + ": point not strictly positive");
}

double problem_scale(const KineticModel& model, const Eigen::VectorXd& x) {
    double s = 1.0;
    if (x.size() > 0) s = std::max(s, x.cwiseAbs().maxCoeff());
    if (model.k.size() > 0) s = std::max(s, model.k.cwiseAbs().maxCoeff());
    return s;
}

Eigen::VectorXd rate_vector(const KineticModel& model, const Eigen::VectorXd& x) {
    require_positive(x, "rate_vector");
    if (x.size() != model.species_count())
        throw std::invalid_argument("rate_vector: dimension mismatch");
    Eigen::VectorXd v(model.reaction_count());
    for (int j = 0; j < model.reaction_count(); ++j) {
        if (auto it = model.hooks.find(j); it != model.hooks.end()) {
            v(j) = it->second.rate(x);
            if (!(v(j) > 0.0))
                throw NumericalFault("rate_vector: hooked rate not positive");
            continue;
        }
        double m = model.k(j);
        for (const auto& [s, c] : model.source[static_cast<size_t>(j)]) m *= ipow(x(s), c);
        v(j) = m;
    }
    return v;
}

Eigen::VectorXd rate_vector_closure(const KineticModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.species_count())
        throw std::invalid_argument("rate_vector_closure: dimension mismatch");
    Eigen::VectorXd v(model.reaction_count());
    for (int j = 0; j < model.reaction_count(); ++j) {
        double m = model.k(j);
        for (const auto& [s, c] : model.source[static_cast<size_t>(j)]) m *= ipow(x(s), c);
        v(j) = m;
    }
    return v;
}

Eigen::MatrixXd rate_jacobian(const KineticModel& model, const Eigen::VectorXd& x) {
    Eigen::VectorXd v = rate_vector(model, x);
    Eigen::MatrixXd dv = Eigen::MatrixXd::Zero(model.reaction_count(), model.species_count());
    for (int j = 0; j < model.reaction_count(); ++j) {
        if (auto it = model.hooks.find(j); it != model.hooks.end()) {
            dv.row(j) = it->second.gradient(x).transpose();
            continue;
        }
        for (const auto& [s, c] : model.source[static_cast<size_t>(j)])
            dv(j, s) = v(j) * static_cast<double>(c) / x(s);
    }
    return dv;
}

Eigen::MatrixXd reduced_jacobian(const KineticModel& model, const Eigen::VectorXd& x) {
    return model.structure.q_d * rate_jacobian(model, x) * model.structure.gamma0_d;
}

Eigen::MatrixXd reduced_jacobian_with_basis(const KineticModel& model, const Eigen::VectorXd& x,
                                            const Eigen::MatrixXd& basis,
                                            const Eigen::MatrixXd& qm) {
    return qm * rate_jacobian(model, x) * basis;
}

double principal_minor_sum(const Eigen::MatrixXd& m, int r, double* abs_scale) {
    int n = static_cast<int>(m.rows());
    if (abs_scale) *abs_scale = 1.0;
    if (r == 0) return 1.0;
    if (r > n) return 0.0;

    if (abs_scale) {
        // Hadamard bounds every r x r minor by the product of its row norms,
        // so e_r of the row norms is the conditioning scale of the sum.
        std::vector<double> rn(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) rn[static_cast<size_t>(i)] = m.row(i).norm();
        std::vector<double> e(static_cast<size_t>(r) + 1, 0.0);
        e[0] = 1.0;
        for (int i = 0; i < n; ++i)
            for (int j = std::min(i + 1, r); j >= 1; --j)
                e[static_cast<size_t>(j)] += rn[static_cast<size_t>(i)] * e[static_cast<size_t>(j - 1)];
        *abs_scale = e[static_cast<size_t>(r)];
    }

    if (r == n) return m.determinant();

    // Work bound: subsets * r^3 flops for the little determinants.
    double work = binomial_count(n, r) * static_cast<double>(r) * r * r;
    if (work <= 5e7) {
        std::vector<int> idx(static_cast<size_t>(r));
        for (int i = 0; i < r; ++i) idx[static_cast<size_t>(i)] = i;
        double sum = 0.0;
        Eigen::MatrixXd sub(r, r);
        while (true) {
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    sub(i, j) = m(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
            sum += sub.determinant();
            int p = r - 1;
            while (p >= 0 && idx[static_cast<size_t>(p)] == n - r + p) --p;
            if (p < 0) break;
            ++idx[static_cast<size_t>(p)];
            for (int q = p + 1; q < r; ++q)
                idx[static_cast<size_t>(q)] = idx[static_cast<size_t>(q - 1)] + 1;
        }
        return sum;
    }

    // Large case: e_r of the spectrum equals the same characteristic
    // polynomial coefficient. Expand prod (t - lambda_i) incrementally.
    std::vector<std::complex<double>> lam = eigenvalues(m);
    std::vector<std::complex<double>> e(static_cast<size_t>(n) + 1, {0.0, 0.0});
    e[0] = {1.0, 0.0};
    for (int i = 0; i < n; ++i)
        for (int j = std::min(i + 1, r); j >= 1; --j)
            e[static_cast<size_t>(j)] += lam[static_cast<size_t>(i)] * e[static_cast<size_t>(j - 1)];
    return e[static_cast<size_t>(r)].real();
}

double reduced_determinant(const KineticModel& model, const Eigen::VectorXd& x) {
    int r = model.structure.rank;
    Eigen::MatrixXd rj = reduced_jacobian(model, x);
    double det_reduced = r == 0 ? 1.0 : rj.determinant();
    Eigen::MatrixXd gdv = model.structure.gamma_d * rate_jacobian(model, x);
    double abs_scale = 0.0;
    double det_minors = principal_minor_sum(gdv, r, &abs_scale);

    // Agreement is relative to the conditioning of both routes: the summand
    // magnitudes of the minor sum and the Hadamard bound of the reduced
    // Jacobian. At exactly degenerate points both values are roundoff around
    // zero and must compare as equal.
    double hadamard = 1.0;
    for (int i = 0; i < r; ++i) hadamard *= rj.row(i).norm();
    double slack =
        1e-8 * std::max({std::abs(det_reduced), std::abs(det_minors), abs_scale, hadamard});
    if (std::abs(det_reduced - det_minors) > slack)
        throw NumericalFault("reduced_determinant: det(Q Dv Gamma0) and the principal-minor sum "
                             "of Gamma*Dv disagree beyond 1e-8 relative");
    return det_reduced;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::NotEquilibrium: return "NotEquilibrium";
        case Verdict::Degenerate: return "Degenerate";
        case Verdict::NondegenerateUnstable: return "NondegenerateUnstable";
        case Verdict::NondegenerateStable: return "NondegenerateStable";
        case Verdict::Marginal: return "Marginal";
    }
    return "?";
}

Classification classify_equilibrium(const KineticModel& model, const Eigen::VectorXd& x,
                                    const Tolerances& tol) {
    require_positive(x, "classify_equilibrium");
    double scale = problem_scale(model, x);
    Classification c;
    Eigen::VectorXd v = rate_vector(model, x);
    c.residual_norm = (model.structure.gamma_d * v).norm();
    c.reduced_det = reduced_determinant(model, x);
    c.spectrum = eigenvalues(reduced_jacobian(model, x));

    if (c.residual_norm > tol.residual * scale) {
        c.verdict = Verdict::NotEquilibrium;
    } else if (std::abs(c.reduced_det) <= tol.degeneracy * scale) {
        c.verdict = Verdict::Degenerate;
    } else {
        double mx = max_real_part(c.spectrum);
        if (mx < -tol.eig_margin * scale)
            c.verdict = Verdict::NondegenerateStable;
        else if (mx > tol.eig_margin * scale)
            c.verdict = Verdict::NondegenerateUnstable;
        else
            c.verdict = Verdict::Marginal;
    }
    return c;
}

}  // namespace crn
