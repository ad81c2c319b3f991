// equilibria.hpp: equilibrium search on stoichiometry classes and
// MPNE/MPSE certificates.

#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "crn/kinetics.hpp"

namespace crn {

struct NewtonOptions {
    int max_iter = 100;
    Tolerances tol;
    double positivity_floor = 1e-30;
};

enum class NewtonStatus { Converged, NonConvergence, LeftPositiveOrthant };

std::string to_string(NewtonStatus s);

/// An equilibrium found on the stoichiometry class of class_anchor:
/// x - class_anchor lies in im Gamma (to tolerance) and x >> 0.
struct EquilibriumPoint {
    Eigen::VectorXd x;
    Eigen::VectorXd class_anchor;
    Classification classification;
};

struct NewtonResult {
    NewtonStatus status = NewtonStatus::NonConvergence;
    std::optional<EquilibriumPoint> point;
    int iterations = 0;
    double residual = 0.0;
};

/// Damped Newton on Q v(x0 + Gamma0 z) = 0 in reduced coordinates z, with
/// step-halving so iterates stay strictly positive.
NewtonResult newton_on_class(const KineticModel& model, const Eigen::VectorXd& x0,
                             const NewtonOptions& opts = {});

/// Same solve, but anchored on `anchor`'s class with the initial iterate at
/// the projection of `start` onto that class.
NewtonResult newton_on_class_from(const KineticModel& model, const Eigen::VectorXd& anchor,
                                  const Eigen::VectorXd& start, const NewtonOptions& opts = {});

struct MultistartOptions {
    int n_starts = 64;
    std::uint64_t seed = 0;
    Eigen::VectorXd box_lo;  // defaults to 1e-3 per species
    Eigen::VectorXd box_hi;  // defaults to 1e+3 per species
    NewtonOptions newton;
    double dedup_rel = 1e-6;
};

/// Log-uniform multistart over the box, projected onto anchor's class, each
/// start Newton-corrected independently. Deterministic for a fixed seed: the
/// returned list (deduplicated, sorted lexicographically) is identical
/// whether starts run in parallel or serially.
std::vector<EquilibriumPoint> multistart_search(const KineticModel& model,
                                                const Eigen::VectorXd& anchor,
                                                const MultistartOptions& opts = {});

/// Serial reference implementation of the same contract, kept for testing
/// and benchmarking against the parallel kernel.
std::vector<EquilibriumPoint> multistart_search_serial(const KineticModel& model,
                                                       const Eigen::VectorXd& anchor,
                                                       const MultistartOptions& opts = {});

struct CompatibilityCheck {
    bool compatible = false;
    double residual = 0.0;
};

/// p - q projected onto the orthogonal complement of im Gamma via the exact
/// conservation rows; compatible iff the residual is <= 1e-9 * (|p| + |q|).
CompatibilityCheck compatible(const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                              const StoichiometricStructure& st);

enum class CertificateVerdict { MPNE, MPSE, Failed };

std::string to_string(CertificateVerdict v);

struct MpneCertificate {
    EquilibriumPoint p;
    EquilibriumPoint q;
    CompatibilityCheck compat;
    bool distinct = false;
    double separation = 0.0;
    CertificateVerdict verdict = CertificateVerdict::Failed;
    std::string failure_reason;
};

MpneCertificate mpne_certificate(const KineticModel& model, const Eigen::VectorXd& p,
                                 const Eigen::VectorXd& q, const Tolerances& tol = {});

// --- MAPK minimal-cascade reduction -------------------------------------

/// Coefficients [c3, c2, c1, c0] of the steady-state cubic in x2 for the
/// 5-species minimal cascade, k = (k1..k6), totals M and N.
std::array<double, 4> mapk_cubic_coefficients(const std::array<double, 6>& k, double M, double N);

/// Positive real roots of c3 x^3 + c2 x^2 + c1 x + c0, via companion-matrix
/// eigenvalues; roots kept when |Im| <= 1e-8 * |root|. Sorted ascending.
std::vector<double> cubic_positive_roots(const std::array<double, 4>& c);

/// Lifts a root x2 of the cubic to the full steady state (x1..x5); both
/// conservation totals hold exactly by construction. Throws
/// std::domain_error when a lifted coordinate is nonpositive.
Eigen::VectorXd mapk_lift(double x2, const std::array<double, 6>& k, double M, double N);

}  // namespace crn
