// kinetics.hpp: mass-action rates, Jacobians, reduced Jacobians / determinants
// and pointwise equilibrium classification.

#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "crn/network.hpp"
#include "crn/stoichiometry.hpp"

namespace crn {

struct NumericalFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double residual = 1e-10;    // equilibrium residual, relative to scale
    double degeneracy = 1e-8;   // |reduced det| threshold, relative to scale
    double eig_margin = 1e-9;   // stability margin, relative to scale
};

/// Per-reaction kinetics override: a rate callback and its gradient. Mass
/// action is the only kinetics the toolkit itself instantiates; the hook is
/// the extension point for other positive kinetics families. Rates must be
/// positive on the positive orthant.
struct RateHook {
    std::function<double(const Eigen::VectorXd&)> rate;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

/// A network with mass-action rate constants, one per reaction, all > 0.
/// Construct through make(); the source-stoichiometry rows are cached for
/// rate and Jacobian evaluation.
struct KineticModel {
    ReactionNetwork net;
    StoichiometricStructure structure;
    Eigen::VectorXd k;

    // source[j] = sparse (species, stoichiometry) row of reaction j
    std::vector<std::vector<std::pair<int, long long>>> source;

    // reactions whose kinetics is supplied by a callback instead of mass action
    std::map<int, RateHook> hooks;

    static KineticModel make(const ReactionNetwork& net, const Eigen::VectorXd& k);

    int species_count() const { return net.species_count(); }
    int reaction_count() const { return net.reaction_count(); }
};

/// Dense vector from an explicit value list (avoids Eigen's braced-init traps).
Eigen::VectorXd vecd(std::initializer_list<double> values);
Eigen::VectorXd vecd(const std::vector<double>& values);

/// Problem scale used by all relative tolerances: max(1, |x|_inf, |k|_inf).
double problem_scale(const KineticModel& model, const Eigen::VectorXd& x);

/// v_j(x) = k_j * prod_i x_i^{a_ij} over the source stoichiometries.
Eigen::VectorXd rate_vector(const KineticModel& model, const Eigen::VectorXd& x);

/// Mass-action rates extended continuously to the closed orthant (0^0 = 1);
/// used to recognize boundary equilibria, which are not positive equilibria.
Eigen::VectorXd rate_vector_closure(const KineticModel& model, const Eigen::VectorXd& x);

/// Dv(x), r0 x n: diag(v) * A * diag(1/x) with A the source rows.
Eigen::MatrixXd rate_jacobian(const KineticModel& model, const Eigen::VectorXd& x);

/// Q * Dv(x) * Gamma0, the r x r Jacobian of the vector field restricted to
/// the stoichiometry class through x.
Eigen::MatrixXd reduced_jacobian(const KineticModel& model, const Eigen::VectorXd& x);

/// Same, against a caller-supplied basis M of im Gamma (with Gamma = M*Qm).
Eigen::MatrixXd reduced_jacobian_with_basis(const KineticModel& model, const Eigen::VectorXd& x,
                                            const Eigen::MatrixXd& basis,
                                            const Eigen::MatrixXd& qm);

/// Sum of r x r principal minors of an n x n matrix. Enumerates subsets when
/// C(n,r) is small; otherwise evaluates the elementary symmetric function of
/// the spectrum (same characteristic-polynomial coefficient). abs_scale, if
/// given, receives the sum of summand magnitudes — the natural conditioning
/// scale of the result.
double principal_minor_sum(const Eigen::MatrixXd& m, int r, double* abs_scale = nullptr);

/// det(Q Dv Gamma0), cross-checked against the principal-minor sum of
/// Gamma*Dv to 1e-8 relative; disagreement raises NumericalFault.
double reduced_determinant(const KineticModel& model, const Eigen::VectorXd& x);

enum class Verdict {
    NotEquilibrium,
    Degenerate,
    NondegenerateUnstable,
    NondegenerateStable,
    Marginal,
};

std::string to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::NotEquilibrium;
    double residual_norm = 0.0;
    double reduced_det = 0.0;
    std::vector<std::complex<double>> spectrum;
};

Classification classify_equilibrium(const KineticModel& model, const Eigen::VectorXd& x,
                                    const Tolerances& tol = {});

void require_positive(const Eigen::VectorXd& x, const char* who);

}  // namespace crn
