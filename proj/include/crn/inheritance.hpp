// inheritance.hpp: lifting an MPNE/MPSE witness through a transform record.
// Instantiates the record's epsilon rate recipe, embeds the base pair at the
// recipe's limit point, Newton-corrects along a decreasing schedule, and
// certifies the lifted pair.

#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "crn/equilibria.hpp"
#include "crn/transforms.hpp"

namespace crn {

inline const std::vector<double> kDefaultSchedule = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

struct BaseWitness {
    KineticModel model;
    Eigen::VectorXd p;
    Eigen::VectorXd q;
    MpneCertificate certificate;
};

/// Certifies (p, q) for the model and wraps it as a lift input; throws
/// std::invalid_argument unless the pair is at least MPNE.
BaseWitness make_base_witness(const KineticModel& model, const Eigen::VectorXd& p,
                              const Eigen::VectorXd& q, const Tolerances& tol = {});

/// Start point in the enlarged space at parameter eps. Per variant: dependent
/// reaction and fully-open extension keep the base point; trivial species and
/// species-with-flow append y = 1; reversible-new-species starts its pivot
/// block at eps * x^gamma; intermediates at eps * V(x) * x^gamma. Composite
/// records thread the point through their stages.
Eigen::VectorXd embed_start(const TransformRecord& record, const KineticModel& base_model,
                            const Eigen::VectorXd& base_point, double eps);

/// Embeds both witness points with the q start corrected along the enlarged
/// stoichiometric subspace so the returned pair is exactly compatible.
std::pair<Eigen::VectorXd, Eigen::VectorXd> embed_pair(const TransformRecord& record,
                                                       const KineticModel& base_model,
                                                       const Eigen::VectorXd& p,
                                                       const Eigen::VectorXd& q, double eps);

enum class LiftStatus { Ok, NonConvergence, CollapsedPair };

std::string to_string(LiftStatus s);

struct LiftPoint {
    double eps = 0.0;
    EquilibriumPoint p;
    EquilibriumPoint q;
    double dist_p_embed = 0.0;  // |p_eps - embed_start(p, eps)|
    double dist_q_embed = 0.0;
};

struct LiftedWitness {
    std::vector<double> schedule;
    std::vector<LiftPoint> curve;  // one entry per converged eps
    LiftStatus status = LiftStatus::NonConvergence;
    double last_good_eps = 0.0;  // 0 when nothing converged
    std::optional<MpneCertificate> final;        // at the smallest converged eps
    std::optional<KineticModel> final_model;
};

/// Tracks both equilibrium curves on one fixed stoichiometry class (anchored
/// at the first epsilon's embedded p start), warm-starting each epsilon from
/// the previous curve point. The lifted pair exists for small epsilon, so a
/// certificate at the smallest converged epsilon is the deliverable; the
/// curve is retained as evidence.
LiftedWitness lift_witness(const BaseWitness& base, const TransformRecord& record,
                           const std::vector<double>& schedule = kDefaultSchedule,
                           const Tolerances& tol = {}, const NewtonOptions& newton = {});

/// Folds lift_witness over a transform chain, feeding each stage's final
/// certified pair to the next stage as its base witness. Throws
/// NumericalFault naming the failing stage.
std::vector<LiftedWitness> verify_chain(const BaseWitness& base,
                                        const std::vector<TransformOp>& ops,
                                        const std::vector<double>& schedule = kDefaultSchedule,
                                        const Tolerances& tol = {},
                                        const NewtonOptions& newton = {});

// --- block-Hurwitz limit demonstration -----------------------------------

enum class HurwitzTestOutcome { HypothesisViolated, AllHurwitz, NotHurwitzSomewhere };

std::string to_string(HurwitzTestOutcome o);

struct HurwitzTestResult {
    HurwitzTestOutcome outcome;
    std::string detail;
};

/// Assembles M(eps) = [[A0, B(eps)], [C(eps), D0/eps]] for each supplied eps
/// and reports whether every instance is Hurwitz. A0 and D0 must themselves
/// be Hurwitz (hypothesis check); the families B, C are expected to grow
/// slower than 1/eps, which is the caller's responsibility.
HurwitzTestResult hurwitz_block_limit_test(const Eigen::MatrixXd& A0, const Eigen::MatrixXd& D0,
                                           const std::function<Eigen::MatrixXd(double)>& B,
                                           const std::function<Eigen::MatrixXd(double)>& C,
                                           const std::vector<double>& eps_values);

}  // namespace crn
