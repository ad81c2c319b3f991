#include "crn/equilibria.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "crn/eig.hpp"

namespace crn {

std::string to_string(NewtonStatus s) {
    switch (s) {
        case NewtonStatus::Converged: return "Converged";
        case NewtonStatus::NonConvergence: return "NonConvergence";
        case NewtonStatus::LeftPositiveOrthant: return "LeftPositiveOrthant";
    }
    return "?";
}

std::string to_string(CertificateVerdict v) {
    switch (v) {
        case CertificateVerdict::MPNE: return "MPNE";
        case CertificateVerdict::MPSE: return "MPSE";
        case CertificateVerdict::Failed: return "Failed";
    }
    return "?";
}

namespace {

// Largest t in (0, 1] such that x + t*dx stays above the floor, by halving.
// Returns 0 when even tiny steps leave the positive orthant.
double positive_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, double floor) {
    double t = 1.0;
    for (int halvings = 0; halvings < 70; ++halvings) {
        if (((x + t * dx).array() > floor).all()) return t;
        t *= 0.5;
    }
    return 0.0;
}

}  // namespace

NewtonResult newton_on_class_from(const KineticModel& model, const Eigen::VectorXd& anchor,
                                  const Eigen::VectorXd& start, const NewtonOptions& opts) {
    require_positive(start, "newton_on_class");
    if (anchor.size() != model.species_count() || start.size() != model.species_count())
        throw std::invalid_argument("newton_on_class: dimension mismatch");

    const int r = model.structure.rank;
    const Eigen::MatrixXd& g0 = model.structure.gamma0_d;
    const Eigen::MatrixXd& q = model.structure.q_d;
    // Residual tolerance tracks the current iterate's scale so convergence
    // here agrees with classify_equilibrium at the returned point.
    auto res_tol_at = [&](const Eigen::VectorXd& xx) {
        return opts.tol.residual * problem_scale(model, xx);
    };

    NewtonResult out;
    if (r == 0) {
        // Zero-rank network: every positive point is an equilibrium.
        out.status = NewtonStatus::Converged;
        out.residual = 0.0;
        out.point = EquilibriumPoint{start, anchor, classify_equilibrium(model, start, opts.tol)};
        return out;
    }

    Eigen::VectorXd z = g0.colPivHouseholderQr().solve(start - anchor);

    // x is maintained by incremental updates with exactly the vectors the
    // positivity check saw; recomputing anchor + Gamma0*z can cancel to zero
    // for near-boundary iterates.
    Eigen::VectorXd x = anchor + g0 * z;
    if (!(x.array() > 0.0).all()) {
        // Shrink the projected start toward the (positive) anchor.
        Eigen::VectorXd dx = g0 * z;
        double t = positive_step(anchor, dx, opts.positivity_floor);
        if (t == 0.0) {
            out.status = NewtonStatus::LeftPositiveOrthant;
            return out;
        }
        z *= t;
        x = anchor + t * dx;
    }

    int polish_left = 2;
    bool converged = false;
    for (int it = 0; it < opts.max_iter; ++it) {
        out.iterations = it;
        Eigen::VectorXd v = rate_vector(model, x);
        Eigen::VectorXd g = q * v;
        out.residual = (g0 * g).norm();  // = |Gamma v(x)|
        if (out.residual <= res_tol_at(x)) {
            converged = true;
            if (polish_left-- <= 0) break;  // quadratic steps push well below tol
        }
        Eigen::MatrixXd jac = q * rate_jacobian(model, x) * g0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible()) break;
        Eigen::VectorXd dz = lu.solve(-g);
        if (!dz.allFinite()) break;
        Eigen::VectorXd dx = g0 * dz;

        double t = positive_step(x, dx, opts.positivity_floor);
        if (t == 0.0) {
            if (converged) break;
            out.status = NewtonStatus::LeftPositiveOrthant;
            return out;
        }
        // Step-halving line search on the reduced residual.
        double gnorm = g.norm();
        Eigen::VectorXd x_next = x + t * dx;
        while (t > 1e-12 && (q * rate_vector(model, x_next)).norm() > (1.0 - 1e-4 * t) * gnorm) {
            t *= 0.5;
            x_next = x + t * dx;
        }
        if (converged && (q * rate_vector(model, x_next)).norm() >= gnorm) break;
        z += t * dz;
        x = x_next;
    }

    Eigen::VectorXd v = rate_vector(model, x);
    out.residual = (model.structure.gamma_d * v).norm();
    if (out.residual > res_tol_at(x)) {
        out.status = NewtonStatus::NonConvergence;
        return out;
    }

    // A root this close to the orthant boundary may be a boundary
    // equilibrium seen at roundoff. If zeroing the near-zero coordinates
    // still solves the equations, it is one, and it is not a positive
    // equilibrium: report it as an escape.
    double xmax = std::max(1.0, x.cwiseAbs().maxCoeff());
    Eigen::VectorXd clamped = x;
    bool suspicious = false;
    for (int i = 0; i < x.size(); ++i)
        if (x(i) <= 1e-5 * xmax) {
            clamped(i) = 0.0;
            suspicious = true;
        }
    if (suspicious) {
        double closure_res = (model.structure.gamma_d * rate_vector_closure(model, clamped)).norm();
        if (closure_res <= res_tol_at(x)) {
            out.status = NewtonStatus::LeftPositiveOrthant;
            return out;
        }
    }

    out.status = NewtonStatus::Converged;
    out.point = EquilibriumPoint{x, anchor, classify_equilibrium(model, x, opts.tol)};
    return out;
}

NewtonResult newton_on_class(const KineticModel& model, const Eigen::VectorXd& x0,
                             const NewtonOptions& opts) {
    require_positive(x0, "newton_on_class");
    return newton_on_class_from(model, x0, x0, opts);
}

namespace {

std::vector<Eigen::VectorXd> sample_starts(const KineticModel& model,
                                           const MultistartOptions& opts) {
    int n = model.species_count();
    if ((opts.box_lo.size() != 0 && opts.box_lo.size() != n) ||
        (opts.box_hi.size() != 0 && opts.box_hi.size() != n))
        throw std::invalid_argument("multistart_search: box dimension mismatch");
    Eigen::VectorXd lo = opts.box_lo.size() == n ? opts.box_lo
                                                 : Eigen::VectorXd::Constant(n, 1e-3);
    Eigen::VectorXd hi = opts.box_hi.size() == n ? opts.box_hi
                                                 : Eigen::VectorXd::Constant(n, 1e+3);
    for (int i = 0; i < n; ++i)
        if (!(lo(i) > 0.0 && hi(i) >= lo(i)))
            throw std::invalid_argument("multistart_search: box must satisfy 0 << lo <= hi");
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Eigen::VectorXd> starts;
    starts.reserve(static_cast<size_t>(opts.n_starts));
    for (int s = 0; s < opts.n_starts; ++s) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i)
            x(i) = std::exp(std::log(lo(i)) + u(rng) * (std::log(hi(i)) - std::log(lo(i))));
        starts.push_back(std::move(x));
    }
    return starts;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

std::vector<EquilibriumPoint> merge_results(std::vector<std::optional<EquilibriumPoint>>& found,
                                            double dedup_rel) {
    std::vector<EquilibriumPoint> reps;
    for (auto& cand : found) {
        if (!cand) continue;
        bool merged = false;
        for (auto& rep : reps) {
            double d = (rep.x - cand->x).norm();
            double s = std::max({1.0, rep.x.norm(), cand->x.norm()});
            if (d <= dedup_rel * s) {
                if (cand->classification.residual_norm < rep.classification.residual_norm)
                    rep = *cand;
                merged = true;
                break;
            }
        }
        if (!merged) reps.push_back(*cand);
    }
    std::sort(reps.begin(), reps.end(),
              [](const EquilibriumPoint& a, const EquilibriumPoint& b) {
                  return lex_less(a.x, b.x);
              });
    return reps;
}

// Moves a sampled box point onto the anchor's stoichiometry class while
// keeping it positive, by alternating projections between the (affine)
// class and the positive orthant. Plain orthogonal projection alone tends
// to go negative in coordinates where the class sits near the boundary.
// Returns an empty vector when the projections fail to reach the positive
// part of the class.
Eigen::VectorXd project_start(const StoichiometricStructure& st,
                              const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& g0_qr,
                              const Eigen::VectorXd& anchor, const Eigen::VectorXd& start) {
    if (st.rank == st.species_count()) return start;  // the class is everything
    double clamp = 1e-9 * std::max(1.0, anchor.maxCoeff());
    Eigen::VectorXd x = start;
    for (int it = 0; it < 60; ++it) {
        x = anchor + st.gamma0_d * g0_qr.solve(x - anchor);
        if ((x.array() > 0.0).all()) return x;
        x = x.cwiseMax(clamp);
    }
    return Eigen::VectorXd();
}

// Positive on-class start by hit-and-run from the anchor: random class
// directions, uniform step inside the exact per-coordinate positivity
// interval. Used when the positive part of the class is too thin a sliver
// for the box projection to land in.
Eigen::VectorXd hit_and_run_start(const StoichiometricStructure& st,
                                  const Eigen::VectorXd& anchor, std::uint64_t substream) {
    std::mt19937_64 rng(substream);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    Eigen::VectorXd x = anchor;
    const int steps = std::max(16, st.rank);
    for (int step = 0; step < steps; ++step) {
        Eigen::VectorXd z(st.rank);
        for (int i = 0; i < st.rank; ++i) z(i) = gauss(rng);
        Eigen::VectorXd d = st.gamma0_d * z;
        double dn = d.norm();
        if (dn == 0.0) continue;
        d /= dn;
        double tlo = -std::numeric_limits<double>::infinity();
        double thi = std::numeric_limits<double>::infinity();
        for (int i = 0; i < x.size(); ++i) {
            if (d(i) > 1e-300) tlo = std::max(tlo, -x(i) / d(i));
            if (d(i) < -1e-300) thi = std::min(thi, -x(i) / d(i));
        }
        if (!(tlo < thi)) continue;
        x += (tlo + u(rng) * (thi - tlo)) * d;
    }
    return x;
}

std::vector<EquilibriumPoint> multistart_impl(const KineticModel& model,
                                              const Eigen::VectorXd& anchor,
                                              const MultistartOptions& opts, bool parallel) {
    require_positive(anchor, "multistart_search");
    std::vector<Eigen::VectorXd> starts = sample_starts(model, opts);
    std::vector<std::optional<EquilibriumPoint>> found(starts.size());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> g0_qr(model.structure.gamma0_d);

    // Each start is an independent Newton solve; results land in their own
    // slot, so the merge below is identical for any thread count.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int s = 0; s < static_cast<int>(starts.size()); ++s) {
        try {
            Eigen::VectorXd prepared =
                project_start(model.structure, g0_qr, anchor, starts[static_cast<size_t>(s)]);
            if (prepared.size() == 0)
                prepared = hit_and_run_start(model.structure, anchor,
                                             opts.seed * 0x100000001b3ULL +
                                                 static_cast<std::uint64_t>(s));
            if (!(prepared.array() > 0.0).all()) continue;
            NewtonResult r = newton_on_class_from(model, anchor, prepared, opts.newton);
            if (r.status == NewtonStatus::Converged) found[static_cast<size_t>(s)] = r.point;
        } catch (const std::exception&) {
            // a failed start is simply not a result; exceptions must not
            // cross the parallel region
        }
    }
    return merge_results(found, opts.dedup_rel);
}

}  // namespace

std::vector<EquilibriumPoint> multistart_search(const KineticModel& model,
                                                const Eigen::VectorXd& anchor,
                                                const MultistartOptions& opts) {
    return multistart_impl(model, anchor, opts, true);
}

std::vector<EquilibriumPoint> multistart_search_serial(const KineticModel& model,
                                                       const Eigen::VectorXd& anchor,
                                                       const MultistartOptions& opts) {
    return multistart_impl(model, anchor, opts, false);
}

CompatibilityCheck compatible(const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                              const StoichiometricStructure& st) {
    if (p.size() != q.size() || p.size() != st.species_count())
        throw std::invalid_argument("compatible: dimension mismatch");
    CompatibilityCheck out;
    const Eigen::MatrixXd& c = st.conservation_d;
    if (c.rows() == 0) {
        out.compatible = true;
        out.residual = 0.0;
        return out;
    }
    Eigen::VectorXd d = p - q;
    Eigen::VectorXd y = (c * c.transpose()).ldlt().solve(c * d);
    out.residual = (c.transpose() * y).norm();
    out.compatible = out.residual <= 1e-9 * (p.norm() + q.norm());
    return out;
}

MpneCertificate mpne_certificate(const KineticModel& model, const Eigen::VectorXd& p,
                                 const Eigen::VectorXd& q, const Tolerances& tol) {
    require_positive(p, "mpne_certificate");
    require_positive(q, "mpne_certificate");
    MpneCertificate cert;
    cert.p = {p, p, classify_equilibrium(model, p, tol)};
    cert.q = {q, q, classify_equilibrium(model, q, tol)};
    cert.compat = compatible(p, q, model.structure);
    double scale = std::max(problem_scale(model, p), problem_scale(model, q));
    cert.separation = (p - q).norm();
    cert.distinct = cert.separation > 1e-6 * scale;

    auto nondegenerate = [](Verdict v) {
        return v == Verdict::NondegenerateStable || v == Verdict::NondegenerateUnstable ||
               v == Verdict::Marginal;
    };
    if (cert.p.classification.verdict == Verdict::NotEquilibrium ||
        cert.q.classification.verdict == Verdict::NotEquilibrium) {
        cert.verdict = CertificateVerdict::Failed;
        cert.failure_reason = "not an equilibrium";
    } else if (!nondegenerate(cert.p.classification.verdict) ||
               !nondegenerate(cert.q.classification.verdict)) {
        cert.verdict = CertificateVerdict::Failed;
        cert.failure_reason = "degenerate";
    } else if (!cert.compat.compatible) {
        cert.verdict = CertificateVerdict::Failed;
        cert.failure_reason = "not compatible";
    } else if (!cert.distinct) {
        cert.verdict = CertificateVerdict::Failed;
        cert.failure_reason = "not distinct";
    } else if (cert.p.classification.verdict == Verdict::NondegenerateStable &&
               cert.q.classification.verdict == Verdict::NondegenerateStable) {
        cert.verdict = CertificateVerdict::MPSE;
    } else {
        cert.verdict = CertificateVerdict::MPNE;
    }
    return cert;
}

std::array<double, 4> mapk_cubic_coefficients(const std::array<double, 6>& k, double M, double N) {
    for (double kj : k)
        if (!(kj > 0.0)) throw std::invalid_argument("mapk_cubic_coefficients: k must be > 0");
    const double k1 = k[0], k2 = k[1], k3 = k[2], k4 = k[3], k5 = k[4], k6 = k[5];
    double c3 = -k1 * k1 * k5 * k6;
    double c2 = k1 * k1 * k5 * k6 * (N - M) - k1 * k1 * k3 * k5 * M -
                2.0 * k1 * k5 * k6 * (k2 + k3);
    double c1 = 2.0 * N * k1 * k3 * k5 * k6 - k3 * k3 * k5 * k6 - 2.0 * k2 * k3 * k5 * k6 -
                M * k1 * k3 * k5 * k6 - k2 * k2 * k5 * k6 + 2.0 * N * k1 * k2 * k5 * k6 -
                M * k1 * k2 * k5 * k6 - M * k1 * k3 * k3 * k5 - M * k1 * k2 * k3 * k5 -
                M * M * k1 * k3 * k3 * k4 - M * M * k1 * k2 * k3 * k4;
    double c0 = k5 * k6 * (k2 + k3) * (k2 + k3) * N;
    return {c3, c2, c1, c0};
}

std::vector<double> cubic_positive_roots(const std::array<double, 4>& c) {
    // Companion matrix of the monic cubic; robust near double roots.
    if (c[0] == 0.0) throw std::invalid_argument("cubic_positive_roots: leading coefficient 0");
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(3, 3);
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    comp(0, 2) = -c[3] / c[0];
    comp(1, 2) = -c[2] / c[0];
    comp(2, 2) = -c[1] / c[0];
    std::vector<double> roots;
    for (const auto& z : eigenvalues(comp))
        if (std::abs(z.imag()) <= 1e-8 * std::max(std::abs(z), 1e-300) && z.real() > 0.0)
            roots.push_back(z.real());
    std::sort(roots.begin(), roots.end());
    return roots;
}

Eigen::VectorXd mapk_lift(double x2, const std::array<double, 6>& k, double M, double N) {
    if (!(x2 > 0.0)) throw std::invalid_argument("mapk_lift: x2 must be positive");
    const double k1 = k[0], k2 = k[1], k3 = k[2], k6 = k[5];
    double den = k2 + k3 + k1 * x2;
    double x3 = k1 * M * x2 / den;
    double x1 = M * (k2 + k3) / den;
    double x4 = k3 * x3 / k6;
    double x5 = N - x2 - x3 - x4;  // conservation total N holds exactly
    Eigen::VectorXd x(5);
    x << x1, x2, x3, x4, x5;
    for (int i = 0; i < 5; ++i)
        if (!(x(i) > 0.0))
            throw std::domain_error("mapk_lift: lifted coordinate x" + std::to_string(i + 1) +
                                    " is nonpositive");
    return x;
}

}  // namespace crn
