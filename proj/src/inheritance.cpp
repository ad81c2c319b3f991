#include "crn/inheritance.hpp"

#include <cmath>

#include "crn/eig.hpp"

namespace crn {

std::string to_string(LiftStatus s) {
    switch (s) {
        case LiftStatus::Ok: return "Ok";
        case LiftStatus::NonConvergence: return "NonConvergence";
        case LiftStatus::CollapsedPair: return "CollapsedPair";
    }
    return "?";
}

std::string to_string(HurwitzTestOutcome o) {
    switch (o) {
        case HurwitzTestOutcome::HypothesisViolated: return "HypothesisViolated";
        case HurwitzTestOutcome::AllHurwitz: return "AllHurwitz";
        case HurwitzTestOutcome::NotHurwitzSomewhere: return "NotHurwitzSomewhere";
    }
    return "?";
}

BaseWitness make_base_witness(const KineticModel& model, const Eigen::VectorXd& p,
                              const Eigen::VectorXd& q, const Tolerances& tol) {
    BaseWitness w{model, p, q, mpne_certificate(model, p, q, tol)};
    if (w.certificate.verdict == CertificateVerdict::Failed)
        throw std::invalid_argument("make_base_witness: pair is not an MPNE witness (" +
                                    w.certificate.failure_reason + ")");
    return w;
}

namespace {

double monomial(const Eigen::VectorXd& x, const Eigen::MatrixXd& exps, int row) {
    double m = 1.0;
    for (int l = 0; l < exps.cols(); ++l) {
        double e = exps(row, l);
        if (e != 0.0) m *= std::pow(x(l), e);
    }
    return m;
}

// The recipe's hat-y block for one stage, at base block point x.
Eigen::VectorXd stage_yhat(const RecipeStage& st, const Eigen::VectorXd& k,
                           const Eigen::VectorXd& x, double eps) {
    Eigen::VectorXd yhat(st.m);
    for (int i = 0; i < st.m; ++i) {
        double v = eps * monomial(x, st.gamma_exp, i);
        if (st.kind == TransformKind::InsertIntermediates) {
            // V(x) = v_targets(x)^(beta_hat^-T)
            double big_v = 1.0;
            for (int t = 0; t < st.m; ++t) {
                double rate = k(st.target_original[static_cast<size_t>(t)]);
                for (const auto& [s, c] : st.target_source[static_cast<size_t>(t)])
                    rate *= std::pow(x(s), static_cast<double>(c));
                big_v *= std::pow(rate, st.v_exp(i, t));
            }
            v *= big_v;
        }
        yhat(i) = v;
    }
    return yhat;
}

Eigen::VectorXd with_new_block(const Eigen::VectorXd& x, const RecipeStage& st,
                               const Eigen::VectorXd& yhat,
                               const Eigen::VectorXd& nonpivot_vals) {
    Eigen::VectorXd out(st.n_after);
    out.head(st.n_before) = x;
    for (int i = 0; i < st.m; ++i) out(st.n_before + st.pivot[static_cast<size_t>(i)]) = yhat(i);
    for (int j = 0; j < st.knew - st.m; ++j)
        out(st.n_before + st.nonpivot[static_cast<size_t>(j)]) = nonpivot_vals(j);
    return out;
}

// Embeds one stage. When `qpoint` is set, it is corrected along the enlarged
// stoichiometric subspace so that (p', q') stays an exactly compatible pair:
// the correction z2 = beta_hat^{-1} (yhat_q - yhat_p) moves q' by the new
// columns (alpha z2, beta z2) of Gamma0'.
void embed_stage(const RecipeStage& st, const Eigen::VectorXd& k, Eigen::VectorXd& p,
                 Eigen::VectorXd* qpoint, double eps) {
    switch (st.kind) {
        case TransformKind::AddDependentReaction:
        case TransformKind::FullyOpenExtension:
            return;
        case TransformKind::AddTrivialSpecies:
        case TransformKind::AddSpeciesWithFlow: {
            auto append_one = [&](Eigen::VectorXd& x) {
                Eigen::VectorXd out(st.n_after);
                out.head(st.n_before) = x;
                out(st.n_before) = 1.0;
                x = out;
            };
            append_one(p);
            if (qpoint) append_one(*qpoint);
            return;
        }
        case TransformKind::AddReversibleNewSpecies:
        case TransformKind::InsertIntermediates: {
            Eigen::VectorXd yp = stage_yhat(st, k, p, eps);
            Eigen::VectorXd ones = Eigen::VectorXd::Ones(st.knew - st.m);
            Eigen::VectorXd p_new = with_new_block(p, st, yp, ones);
            if (qpoint) {
                Eigen::VectorXd yq = stage_yhat(st, k, *qpoint, eps);
                Eigen::VectorXd z2 = st.beta_hat_inv * (yq - yp);
                Eigen::VectorXd q_old = qpoint->head(st.n_before) + st.alpha_d * z2;
                Eigen::VectorXd q_non = ones + st.beta_nonpivot * z2;
                Eigen::VectorXd q_new(st.n_after);
                q_new.head(st.n_before) = q_old;
                for (int i = 0; i < st.m; ++i)
                    q_new(st.n_before + st.pivot[static_cast<size_t>(i)]) = yq(i);
                for (int j = 0; j < st.knew - st.m; ++j)
                    q_new(st.n_before + st.nonpivot[static_cast<size_t>(j)]) = q_non(j);
                if (!(q_new.array() > 0.0).all())
                    throw NumericalFault(
                        "embed_pair: compatibility correction left the positive orthant; "
                        "try a smaller leading epsilon");
                *qpoint = q_new;
            }
            p = p_new;
            return;
        }
        case TransformKind::AddEnzymeMechanism:
            throw std::logic_error("embed_stage: composite stage cannot appear in a recipe");
    }
}

void embed_walk(const TransformRecord& record, const KineticModel& base_model,
                Eigen::VectorXd& p, Eigen::VectorXd* q, double eps) {
    if (p.size() != base_model.species_count())
        throw std::invalid_argument("embed_start: point dimension mismatch");
    Eigen::VectorXd k = base_model.k;
    const Eigen::VectorXd witness = p;
    for (const RecipeStage& st : record.recipe.stages) {
        embed_stage(st, k, p, q, eps);
        k = instantiate_stage(st, k, eps, &witness);
    }
}

}  // namespace

Eigen::VectorXd embed_start(const TransformRecord& record, const KineticModel& base_model,
                            const Eigen::VectorXd& base_point, double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("embed_start: eps must lie in (0, 1]");
    require_positive(base_point, "embed_start");
    Eigen::VectorXd p = base_point;
    embed_walk(record, base_model, p, nullptr, eps);
    return p;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> embed_pair(const TransformRecord& record,
                                                       const KineticModel& base_model,
                                                       const Eigen::VectorXd& p,
                                                       const Eigen::VectorXd& q, double eps) {
    require_positive(p, "embed_pair");
    require_positive(q, "embed_pair");
    Eigen::VectorXd pe = p;
    Eigen::VectorXd qe = q;
    embed_walk(record, base_model, pe, &qe, eps);
    return {pe, qe};
}

LiftedWitness lift_witness(const BaseWitness& base, const TransformRecord& record,
                           const std::vector<double>& schedule, const Tolerances& tol,
                           const NewtonOptions& newton) {
    if (base.certificate.verdict == CertificateVerdict::Failed)
        throw std::invalid_argument("lift_witness: base certificate is not MPNE/MPSE");
    if (schedule.empty()) throw std::invalid_argument("lift_witness: empty schedule");
    for (size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0 && schedule[i] <= 1.0))
            throw std::invalid_argument("lift_witness: schedule values must lie in (0, 1]");
        if (i > 0 && !(schedule[i] < schedule[i - 1]))
            throw std::invalid_argument("lift_witness: schedule must decrease");
    }
    if (base.model.net != record.source_net)
        throw std::invalid_argument("lift_witness: record does not extend the base network");

    LiftedWitness out;
    out.schedule = schedule;

    // The constructions support the lifted pair only for sufficiently small eps,
    // so leading schedule values may not support it yet: while the curve has
    // not started, a failure re-embeds at the next eps. Once both curves
    // exist they continue, warm-started, on one fixed stoichiometry class
    // (the one through the first successful embedded p start).
    NewtonOptions nopts = newton;
    nopts.tol = tol;
    Eigen::VectorXd anchor, cur_p, cur_q;
    std::optional<KineticModel> good_model;

    for (double eps : schedule) {
        bool starting = out.curve.empty();
        if (starting) {
            try {
                auto [sp, sq] = embed_pair(record, base.model, base.p, base.q, eps);
                anchor = sp;
                cur_p = sp;
                cur_q = sq;
            } catch (const NumericalFault&) {
                // embedding correction out of range: eps not yet small enough
                out.status = LiftStatus::NonConvergence;
                continue;
            }
        }
        Eigen::VectorXd k = record.recipe.instantiate(base.model.k, eps, &base.p);
        KineticModel model_eps = KineticModel::make(record.result_net, k);
        NewtonResult rp = newton_on_class_from(model_eps, anchor, cur_p, nopts);
        NewtonResult rq = newton_on_class_from(model_eps, anchor, cur_q, nopts);
        if (rp.status != NewtonStatus::Converged || rq.status != NewtonStatus::Converged) {
            out.status = LiftStatus::NonConvergence;
            if (starting) continue;  // eps not yet small enough
            break;
        }
        double scale = problem_scale(model_eps, rp.point->x);
        if ((rp.point->x - rq.point->x).norm() <= 1e-6 * scale) {
            out.status = LiftStatus::CollapsedPair;
            if (starting) continue;  // the pair does not exist at this eps yet
            break;
        }
        LiftPoint lp;
        lp.eps = eps;
        lp.p = *rp.point;
        lp.q = *rq.point;
        lp.dist_p_embed = (rp.point->x - embed_start(record, base.model, base.p, eps)).norm();
        lp.dist_q_embed = (rq.point->x - embed_start(record, base.model, base.q, eps)).norm();
        out.curve.push_back(lp);
        out.last_good_eps = eps;
        good_model = std::move(model_eps);
        cur_p = rp.point->x;
        cur_q = rq.point->x;
        out.status = LiftStatus::Ok;
    }

    if (!out.curve.empty()) {
        out.final = mpne_certificate(*good_model, out.curve.back().p.x, out.curve.back().q.x, tol);
        out.final_model = std::move(good_model);
    }
    return out;
}

std::vector<LiftedWitness> verify_chain(const BaseWitness& base,
                                        const std::vector<TransformOp>& ops,
                                        const std::vector<double>& schedule,
                                        const Tolerances& tol, const NewtonOptions& newton) {
    std::vector<LiftedWitness> out;
    BaseWitness cur = base;
    for (size_t i = 0; i < ops.size(); ++i) {
        TransformRecord rec = apply_transform(cur.model.net, ops[i]);
        LiftedWitness lw = lift_witness(cur, rec, schedule, tol, newton);
        if (!lw.final || lw.final->verdict == CertificateVerdict::Failed)
            throw NumericalFault("verify_chain: stage " + std::to_string(i) + " (" +
                                 to_string(kind_of(ops[i])) + ") failed: " +
                                 (lw.final ? lw.final->failure_reason : to_string(lw.status)));
        BaseWitness next{*lw.final_model, lw.final->p.x, lw.final->q.x, *lw.final};
        out.push_back(std::move(lw));
        cur = std::move(next);
    }
    return out;
}

HurwitzTestResult hurwitz_block_limit_test(const Eigen::MatrixXd& A0, const Eigen::MatrixXd& D0,
                                           const std::function<Eigen::MatrixXd(double)>& B,
                                           const std::function<Eigen::MatrixXd(double)>& C,
                                           const std::vector<double>& eps_values) {
    if (A0.rows() != A0.cols() || D0.rows() != D0.cols())
        throw std::invalid_argument("hurwitz_block_limit_test: blocks must be square");
    if (eps_values.empty())
        throw std::invalid_argument("hurwitz_block_limit_test: no epsilon values");
    if (!is_hurwitz(A0))
        return {HurwitzTestOutcome::HypothesisViolated, "A0 is not Hurwitz"};
    if (!is_hurwitz(D0))
        return {HurwitzTestOutcome::HypothesisViolated, "D0 is not Hurwitz"};

    const int n = static_cast<int>(A0.rows());
    const int m = static_cast<int>(D0.rows());
    for (double eps : eps_values) {
        if (!(eps > 0.0))
            throw std::invalid_argument("hurwitz_block_limit_test: eps must be positive");
        Eigen::MatrixXd b = B(eps);
        Eigen::MatrixXd c = C(eps);
        if (b.rows() != n || b.cols() != m || c.rows() != m || c.cols() != n)
            throw std::invalid_argument("hurwitz_block_limit_test: off-diagonal block shape");
        Eigen::MatrixXd mfull(n + m, n + m);
        mfull.topLeftCorner(n, n) = A0;
        mfull.topRightCorner(n, m) = b;
        mfull.bottomLeftCorner(m, n) = c;
        mfull.bottomRightCorner(m, m) = D0 / eps;
        if (!is_hurwitz(mfull))
            return {HurwitzTestOutcome::NotHurwitzSomewhere,
                    "M(eps) not Hurwitz at eps = " + std::to_string(eps)};
    }
    return {HurwitzTestOutcome::AllHurwitz, ""};
}

}  // namespace crn
