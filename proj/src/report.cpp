#include "crn/report.hpp"

#include "crn/dsl.hpp"

namespace crn {

Json vector_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json matrix_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

Json int_matrix_json(const std::vector<std::vector<long long>>& m) {
    Json rows = Json::array();
    for (const auto& r : m) {
        Json row = Json::array();
        for (long long v : r) row.push_back(v);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Json to_json(const ReactionNetwork& net) {
    Json j;
    j["species"] = net.species;
    Json rs = Json::array();
    for (const Reaction& r : net.reactions) {
        Json jr;
        jr["source"] = render_complex(net, r.source);
        jr["target"] = render_complex(net, r.target);
        rs.push_back(std::move(jr));
    }
    j["reactions"] = std::move(rs);
    return j;
}

Json to_json(const ReactionNetwork& net, const StoichiometricStructure& st) {
    Json j = to_json(net);
    j["gamma"] = int_matrix_json(st.gamma);
    return j;
}

Json to_json(const Classification& c) {
    Json j;
    j["verdict"] = to_string(c.verdict);
    j["residual"] = c.residual_norm;
    j["reduced_det"] = c.reduced_det;
    Json spec = Json::array();
    for (const auto& z : c.spectrum) {
        Json e;
        e["re"] = z.real();
        e["im"] = z.imag();
        spec.push_back(std::move(e));
    }
    j["spectrum"] = std::move(spec);
    return j;
}

Json to_json(const EquilibriumPoint& p) {
    Json j;
    j["x"] = vector_json(p.x);
    j["class_anchor"] = vector_json(p.class_anchor);
    j["classification"] = to_json(p.classification);
    return j;
}

Json to_json(const CompatibilityCheck& c) {
    Json j;
    j["compatible"] = c.compatible;
    j["residual"] = c.residual;
    return j;
}

Json to_json(const MpneCertificate& cert) {
    Json j;
    j["verdict"] = to_string(cert.verdict);
    if (cert.verdict == CertificateVerdict::Failed) j["reason"] = cert.failure_reason;
    j["p"] = to_json(cert.p);
    j["q"] = to_json(cert.q);
    j["compatibility"] = to_json(cert.compat);
    j["distinct"] = cert.distinct;
    j["separation"] = cert.separation;
    return j;
}

Json to_json(const RecipeStage& st) {
    Json j;
    j["variant"] = to_string(st.kind);
    j["species_before"] = st.n_before;
    j["species_after"] = st.n_after;
    j["reactions_before"] = st.r_before;
    j["reactions_after"] = st.r_after;
    if (!st.eps_reactions.empty()) j["eps_reactions"] = st.eps_reactions;
    if (!st.flows.empty()) {
        Json fl = Json::array();
        for (const auto& f : st.flows) {
            Json e;
            e["reaction"] = f.reaction;
            e["species"] = f.species;
            e["direction"] = f.inflow ? "inflow" : "outflow";
            fl.push_back(std::move(e));
        }
        j["flows"] = std::move(fl);
        if (st.anchor.size() > 0) j["anchor"] = vector_json(st.anchor);
    }
    if (!st.inv_eps_reactions.empty()) j["inv_eps_reactions"] = st.inv_eps_reactions;
    if (st.m > 0) {
        j["m"] = st.m;
        j["new_species_count"] = st.knew;
        j["pivot_rows"] = st.pivot;
        j["exponent_matrices"] = Json{{"gamma", matrix_json(st.gamma_exp)},
                                      {"delta", matrix_json(st.delta_exp)}};
        if (!st.fwd_reactions.empty()) {
            j["forward_reactions"] = st.fwd_reactions;
            j["reverse_reactions"] = st.rev_reactions;
            j["kplus_exponents"] = st.kplus_exp;
            j["kminus_exponents"] = st.kminus_exp;
        }
        if (!st.first_leg.empty()) {
            j["targets"] = st.target_original;
            j["first_leg"] = st.first_leg;
            j["second_leg"] = st.second_leg;
            j["ksecond_exponents"] = st.ksecond_exp;
            j["v_exponents"] = matrix_json(st.v_exp);
        }
    }
    return j;
}

Json to_json(const TransformRecord& rec) {
    Json j;
    j["op"] = to_string(kind_of(rec.op));
    j["result_dsl"] = render_network(rec.result_net);
    j["result"] = to_json(rec.result_net);
    j["species_map"] = rec.species_map;
    Json rmap = Json::array();
    for (const auto& m : rec.reaction_map) {
        if (m)
            rmap.push_back(*m);
        else
            rmap.push_back(nullptr);
    }
    j["reaction_map"] = std::move(rmap);
    j["new_species"] = rec.new_species;
    j["new_reactions"] = rec.new_reactions;
    Json stages = Json::array();
    for (const auto& st : rec.recipe.stages) stages.push_back(to_json(st));
    j["recipe"] = Json{{"stages", std::move(stages)}};
    if (!rec.warnings.empty()) j["warnings"] = rec.warnings;
    return j;
}

Json to_json(const LiftedWitness& w) {
    Json j;
    j["status"] = to_string(w.status);
    j["schedule"] = w.schedule;
    j["last_good_eps"] = w.last_good_eps;
    Json curve = Json::array();
    for (const LiftPoint& lp : w.curve) {
        Json e;
        e["eps"] = lp.eps;
        e["p"] = to_json(lp.p);
        e["q"] = to_json(lp.q);
        e["dist_p_embed"] = lp.dist_p_embed;
        e["dist_q_embed"] = lp.dist_q_embed;
        curve.push_back(std::move(e));
    }
    j["curve"] = std::move(curve);
    if (w.final) j["final"] = to_json(*w.final);
    if (w.final_model) j["final_k"] = vector_json(w.final_model->k);
    return j;
}

Json analysis_report(const ReactionNetwork& net, const StoichiometricStructure& st,
                     const Json& certificates) {
    Json j;
    j["network"] = to_json(net);
    Json s;
    s["rank"] = st.rank;
    s["conservation"] = int_matrix_json(st.conservation);
    j["structure"] = std::move(s);
    j["certificates"] = certificates;
    return j;
}

}  // namespace crn
