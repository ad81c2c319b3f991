#include "crn/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "crn/graph.hpp"
#include "crn/rational.hpp"
#include "crn/stoichiometry.hpp"

namespace crn {

std::string to_string(TransformError::Code c) {
    switch (c) {
        case TransformError::Code::IndependentReaction: return "IndependentReaction";
        case TransformError::Code::RankDeficient: return "RankDeficient";
        case TransformError::Code::EmptyIntermediate: return "EmptyIntermediate";
        case TransformError::Code::NotInduced: return "NotInduced";
        case TransformError::Code::NotFullyOpen: return "NotFullyOpen";
        case TransformError::Code::BadParams: return "BadParams";
    }
    return "?";
}

std::string to_string(TransformKind k) {
    switch (k) {
        case TransformKind::AddDependentReaction: return "AddDependentReaction";
        case TransformKind::FullyOpenExtension: return "FullyOpenExtension";
        case TransformKind::AddTrivialSpecies: return "AddTrivialSpecies";
        case TransformKind::AddSpeciesWithFlow: return "AddSpeciesWithFlow";
        case TransformKind::AddReversibleNewSpecies: return "AddReversibleNewSpecies";
        case TransformKind::InsertIntermediates: return "InsertIntermediates";
        case TransformKind::AddEnzymeMechanism: return "AddEnzymeMechanism";
    }
    return "?";
}

TransformKind kind_of(const TransformOp& op) {
    return std::visit(
        [](const auto& o) -> TransformKind {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, AddDependentReactionOp>)
                return TransformKind::AddDependentReaction;
            else if constexpr (std::is_same_v<T, FullyOpenExtensionOp>)
                return TransformKind::FullyOpenExtension;
            else if constexpr (std::is_same_v<T, AddTrivialSpeciesOp>)
                return TransformKind::AddTrivialSpecies;
            else if constexpr (std::is_same_v<T, AddSpeciesWithFlowOp>)
                return TransformKind::AddSpeciesWithFlow;
            else if constexpr (std::is_same_v<T, AddReversibleNewSpeciesOp>)
                return TransformKind::AddReversibleNewSpecies;
            else if constexpr (std::is_same_v<T, InsertIntermediatesOp>)
                return TransformKind::InsertIntermediates;
            else
                return TransformKind::AddEnzymeMechanism;
        },
        op);
}

namespace {

using Code = TransformError::Code;

[[noreturn]] void fail(Code c, const std::string& msg) { throw TransformError(c, msg); }

std::vector<int> identity_passthrough(int r) {
    std::vector<int> p(static_cast<size_t>(r));
    for (int j = 0; j < r; ++j) p[static_cast<size_t>(j)] = j;
    return p;
}

TransformRecord base_record(const ReactionNetwork& net, TransformOp op) {
    TransformRecord rec;
    rec.op = std::move(op);
    rec.source_net = net;
    rec.species_map.resize(static_cast<size_t>(net.species_count()));
    for (int i = 0; i < net.species_count(); ++i) rec.species_map[static_cast<size_t>(i)] = i;
    rec.reaction_map.resize(static_cast<size_t>(net.reaction_count()));
    for (int j = 0; j < net.reaction_count(); ++j) rec.reaction_map[static_cast<size_t>(j)] = j;
    return rec;
}

void finish_record(TransformRecord& rec) {
    rec.new_species.clear();
    for (int i = rec.source_net.species_count(); i < rec.result_net.species_count(); ++i)
        rec.new_species.push_back(i);
    std::vector<bool> mapped(static_cast<size_t>(rec.result_net.reaction_count()), false);
    for (const auto& m : rec.reaction_map)
        if (m) mapped[static_cast<size_t>(*m)] = true;
    rec.new_reactions.clear();
    for (int j = 0; j < rec.result_net.reaction_count(); ++j)
        if (!mapped[static_cast<size_t>(j)]) rec.new_reactions.push_back(j);
}

void check_fresh_name(const ReactionNetwork& net, const std::string& name) {
    if (name.empty()) fail(Code::BadParams, "empty species name");
    if (net.species_index(name) >= 0)
        fail(Code::BadParams, "species name already in use: " + name);
}

Complex resolve_complex(const ReactionNetwork& net, const NamedComplex& nc, Code unknown_code,
                        const char* who) {
    Complex c;
    for (const auto& [name, coeff] : nc) {
        if (coeff < 0) fail(Code::BadParams, std::string(who) + ": negative stoichiometry");
        int idx = net.species_index(name);
        if (idx < 0) fail(unknown_code, std::string(who) + ": unknown species " + name);
        c.add(idx, coeff);
    }
    return c;
}

// Exact pivot structure of an integer block beta (knew x m). Fails with
// RankDeficient when the column rank is below m.
struct PivotData {
    std::vector<int> pivot;     // row indices, column order
    std::vector<int> nonpivot;  // remaining rows, ascending
    RatMat beta_hat_inv;        // m x m
    RatMat beta_nonpivot;       // (knew-m) x m
};

PivotData pivot_structure(const std::vector<std::vector<long long>>& beta, int m,
                          const char* who) {
    PivotData pd;
    RatMat b = RatMat::from_int(beta);
    b.cols = m;  // beta may have zero rows only when knew == 0 (caller rejects)
    pd.pivot = pivot_rows_by_columns(b);
    if (static_cast<int>(pd.pivot.size()) != m)
        fail(Code::RankDeficient,
             std::string(who) + ": new-species stoichiometry block has rank " +
                 std::to_string(pd.pivot.size()) + " < " + std::to_string(m));
    std::set<int> pivset(pd.pivot.begin(), pd.pivot.end());
    for (int i = 0; i < static_cast<int>(beta.size()); ++i)
        if (!pivset.count(i)) pd.nonpivot.push_back(i);

    RatMat bhat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) bhat.at(i, j) = Rat(beta[static_cast<size_t>(pd.pivot[i])][static_cast<size_t>(j)]);
    pd.beta_hat_inv = inverse(bhat);
    int extra = static_cast<int>(beta.size()) - m;
    pd.beta_nonpivot = RatMat(extra, m);
    for (int i = 0; i < extra; ++i)
        for (int j = 0; j < m; ++j)
            pd.beta_nonpivot.at(i, j) = Rat(beta[static_cast<size_t>(pd.nonpivot[i])][static_cast<size_t>(j)]);
    return pd;
}

// gamma = -(block * beta_hat^{-1})^t computed exactly, returned as double.
Eigen::MatrixXd exponent_matrix(const std::vector<std::vector<long long>>& block,
                                const RatMat& beta_hat_inv) {
    RatMat b = RatMat::from_int(block);
    b.cols = beta_hat_inv.rows;
    RatMat prod = mat_mul(b, beta_hat_inv);
    Eigen::MatrixXd g(prod.cols, prod.rows);
    for (int i = 0; i < prod.rows; ++i)
        for (int j = 0; j < prod.cols; ++j) g(j, i) = -prod.at(i, j).to_double();
    return g;
}

}  // namespace

Eigen::VectorXd instantiate_stage(const RecipeStage& st, const Eigen::VectorXd& k, double eps,
                                  const Eigen::VectorXd* witness_anchor) {
    if (k.size() != st.r_before)
        throw std::invalid_argument("instantiate_stage: rate vector length mismatch");
    Eigen::VectorXd next = Eigen::VectorXd::Zero(st.r_after);
    for (int j = 0; j < st.r_before; ++j)
        if (st.passthrough[static_cast<size_t>(j)] >= 0)
            next(st.passthrough[static_cast<size_t>(j)]) = k(j);
    for (int idx : st.eps_reactions) next(idx) = eps;
    for (const auto& f : st.flows) {
        if (f.inflow) {
            const Eigen::VectorXd* xh = st.anchor.size() > 0 ? &st.anchor : witness_anchor;
            if (!xh || xh->size() != st.n_before)
                throw std::invalid_argument(
                    "instantiate_stage: fully-open stage needs an anchor point");
            next(f.reaction) = eps * (*xh)(f.species);
        } else {
            next(f.reaction) = eps;
        }
    }
    for (int idx : st.inv_eps_reactions) next(idx) = 1.0 / eps;
    for (size_t i = 0; i < st.fwd_reactions.size(); ++i) {
        next(st.fwd_reactions[i]) = std::pow(eps, st.kplus_exp[i]);
        next(st.rev_reactions[i]) = std::pow(eps, st.kminus_exp[i]);
    }
    for (size_t i = 0; i < st.first_leg.size(); ++i) {
        next(st.first_leg[i]) = k(st.target_original[i]);
        next(st.second_leg[i]) = std::pow(eps, st.ksecond_exp[i]);
    }
    return next;
}

Eigen::VectorXd RateRecipe::instantiate(const Eigen::VectorXd& base_k, double eps,
                                        const Eigen::VectorXd* witness_anchor) const {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("RateRecipe::instantiate: eps must lie in (0, 1]");
    Eigen::VectorXd k = base_k;
    for (const RecipeStage& st : stages) k = instantiate_stage(st, k, eps, witness_anchor);
    for (int j = 0; j < k.size(); ++j)
        if (!(k(j) > 0.0))
            throw std::logic_error("RateRecipe::instantiate: nonpositive rate constant");
    return k;
}

TransformRecord add_dependent_reaction(const ReactionNetwork& net, const Reaction& r) {
    int n = net.species_count();
    for (const auto& [s, c] : r.source.coeff)
        if (s < 0 || s >= n) fail(Code::BadParams, "add_dependent_reaction: species out of range");
    for (const auto& [s, c] : r.target.coeff)
        if (s < 0 || s >= n) fail(Code::BadParams, "add_dependent_reaction: species out of range");

    auto gamma = stoichiometric_matrix(net);
    std::vector<std::vector<long long>> aug = gamma;
    for (int i = 0; i < n; ++i)
        aug[static_cast<size_t>(i)].push_back(r.target.coefficient(i) - r.source.coefficient(i));
    RatMat g = RatMat::from_int(gamma);
    g.cols = net.reaction_count();
    if (rank_of(RatMat::from_int(aug)) != rank_of(g))
        fail(Code::IndependentReaction,
             "add_dependent_reaction: reaction vector lies outside im Gamma");

    TransformRecord rec = base_record(net, AddDependentReactionOp{r});
    rec.result_net = net;
    rec.result_net.reactions.push_back(r);

    RecipeStage st;
    st.kind = TransformKind::AddDependentReaction;
    st.n_before = st.n_after = n;
    st.r_before = net.reaction_count();
    st.r_after = st.r_before + 1;
    st.passthrough = identity_passthrough(st.r_before);
    st.eps_reactions = {st.r_before};
    rec.recipe.stages.push_back(std::move(st));
    finish_record(rec);
    return rec;
}

TransformRecord fully_open_extension(const ReactionNetwork& net, const Eigen::VectorXd& anchor) {
    int n = net.species_count();
    if (anchor.size() != 0 && anchor.size() != n)
        fail(Code::BadParams, "fully_open_extension: anchor dimension mismatch");
    for (int i = 0; i < anchor.size(); ++i)
        if (!(anchor(i) > 0.0)) fail(Code::BadParams, "fully_open_extension: anchor not positive");

    TransformRecord rec = base_record(net, FullyOpenExtensionOp{anchor});
    rec.result_net = net;

    RecipeStage st;
    st.kind = TransformKind::FullyOpenExtension;
    st.n_before = st.n_after = n;
    st.r_before = net.reaction_count();
    st.passthrough = identity_passthrough(st.r_before);
    st.anchor = anchor;
    for (int i = 0; i < n; ++i) {
        Complex xi;
        xi.add(i, 1);
        Reaction inflow{Complex{}, xi};
        Reaction outflow{xi, Complex{}};
        if (find_reaction(net, inflow) < 0) {
            st.flows.push_back({rec.result_net.reaction_count(), i, true});
            rec.result_net.reactions.push_back(inflow);
        }
        if (find_reaction(net, outflow) < 0) {
            st.flows.push_back({rec.result_net.reaction_count(), i, false});
            rec.result_net.reactions.push_back(outflow);
        }
    }
    st.r_after = rec.result_net.reaction_count();
    rec.recipe.stages.push_back(std::move(st));
    finish_record(rec);
    return rec;
}

TransformRecord add_trivial_species(const ReactionNetwork& net, const std::string& name,
                                    const std::vector<long long>& s) {
    if (static_cast<int>(s.size()) != net.reaction_count())
        fail(Code::BadParams, "add_trivial_species: s must have one entry per reaction");
    check_fresh_name(net, name);
    bool all_zero = true;
    for (long long v : s) {
        if (v < 0) fail(Code::BadParams, "add_trivial_species: negative stoichiometry");
        if (v > 0) all_zero = false;
    }

    TransformRecord rec = base_record(net, AddTrivialSpeciesOp{name, s});
    rec.result_net = net;
    int y = rec.result_net.add_species(name);
    for (int j = 0; j < net.reaction_count(); ++j) {
        if (s[static_cast<size_t>(j)] == 0) continue;
        rec.result_net.reactions[static_cast<size_t>(j)].source.add(y, s[static_cast<size_t>(j)]);
        rec.result_net.reactions[static_cast<size_t>(j)].target.add(y, s[static_cast<size_t>(j)]);
    }
    if (all_zero)
        rec.warnings.push_back("trivial species " + name + " participates in no reaction");

    RecipeStage st;
    st.kind = TransformKind::AddTrivialSpecies;
    st.n_before = net.species_count();
    st.n_after = st.n_before + 1;
    st.r_before = st.r_after = net.reaction_count();
    st.passthrough = identity_passthrough(st.r_before);
    rec.recipe.stages.push_back(std::move(st));
    finish_record(rec);
    return rec;
}

TransformRecord add_species_with_flow(const ReactionNetwork& net, const std::string& name,
                                      const std::vector<long long>& left_add,
                                      const std::vector<long long>& right_add) {
    if (static_cast<int>(left_add.size()) != net.reaction_count() ||
        static_cast<int>(right_add.size()) != net.reaction_count())
        fail(Code::BadParams, "add_species_with_flow: per-reaction vectors sized wrong");
    check_fresh_name(net, name);
    for (long long v : left_add)
        if (v < 0) fail(Code::BadParams, "add_species_with_flow: negative stoichiometry");
    for (long long v : right_add)
        if (v < 0) fail(Code::BadParams, "add_species_with_flow: negative stoichiometry");

    TransformRecord rec = base_record(net, AddSpeciesWithFlowOp{name, left_add, right_add});
    rec.result_net = net;
    int y = rec.result_net.add_species(name);
    for (int j = 0; j < net.reaction_count(); ++j) {
        rec.result_net.reactions[static_cast<size_t>(j)].source.add(y, left_add[static_cast<size_t>(j)]);
        rec.result_net.reactions[static_cast<size_t>(j)].target.add(y, right_add[static_cast<size_t>(j)]);
    }
    Complex yc;
    yc.add(y, 1);
    int r0 = net.reaction_count();
    rec.result_net.reactions.push_back({Complex{}, yc});
    rec.result_net.reactions.push_back({yc, Complex{}});

    RecipeStage st;
    st.kind = TransformKind::AddSpeciesWithFlow;
    st.n_before = net.species_count();
    st.n_after = st.n_before + 1;
    st.r_before = r0;
    st.r_after = r0 + 2;
    st.passthrough = identity_passthrough(r0);
    st.inv_eps_reactions = {r0, r0 + 1};
    rec.recipe.stages.push_back(std::move(st));
    finish_record(rec);
    return rec;
}

TransformRecord add_reversible_new_species(const ReactionNetwork& net,
                                           const AddReversibleNewSpeciesOp& op) {
    int m = static_cast<int>(op.pairs.size());
    if (m == 0) fail(Code::BadParams, "add_reversible_new_species: no reactions given");
    int knew = static_cast<int>(op.new_species.size());
    if (knew == 0) fail(Code::BadParams, "add_reversible_new_species: no new species given");

    TransformRecord rec = base_record(net, op);
    rec.result_net = net;
    for (const auto& name : op.new_species) {
        check_fresh_name(rec.result_net, name);
        rec.result_net.add_species(name);
    }
    int n = net.species_count();
    std::vector<Reaction> fwd(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        fwd[static_cast<size_t>(i)].source = resolve_complex(rec.result_net, op.pairs[static_cast<size_t>(i)].left,
                                                             Code::BadParams, "add_reversible_new_species");
        fwd[static_cast<size_t>(i)].target = resolve_complex(rec.result_net, op.pairs[static_cast<size_t>(i)].right,
                                                             Code::BadParams, "add_reversible_new_species");
    }

    // beta: net stoichiometry of the new species across the forward reactions.
    std::vector<std::vector<long long>> beta(static_cast<size_t>(knew),
                                             std::vector<long long>(static_cast<size_t>(m), 0));
    std::vector<std::vector<long long>> alpha(static_cast<size_t>(n),
                                              std::vector<long long>(static_cast<size_t>(m), 0));
    for (int i = 0; i < m; ++i) {
        for (int sidx = 0; sidx < rec.result_net.species_count(); ++sidx) {
            long long d = fwd[static_cast<size_t>(i)].target.coefficient(sidx) -
                          fwd[static_cast<size_t>(i)].source.coefficient(sidx);
            if (d == 0) continue;
            if (sidx < n)
                alpha[static_cast<size_t>(sidx)][static_cast<size_t>(i)] = d;
            else
                beta[static_cast<size_t>(sidx - n)][static_cast<size_t>(i)] = d;
        }
    }
    PivotData pd = pivot_structure(beta, m, "add_reversible_new_species");

    RecipeStage st;
    st.kind = TransformKind::AddReversibleNewSpecies;
    st.n_before = n;
    st.n_after = n + knew;
    st.r_before = net.reaction_count();
    st.r_after = st.r_before + 2 * m;
    st.passthrough = identity_passthrough(st.r_before);
    st.m = m;
    st.knew = knew;
    for (int j = 0; j < knew; ++j) st.new_species_abs.push_back(n + j);
    st.pivot = pd.pivot;
    st.nonpivot = pd.nonpivot;
    st.beta_hat_inv = to_eigen(pd.beta_hat_inv);
    st.beta_nonpivot = to_eigen(pd.beta_nonpivot);
    st.alpha_d = to_eigen(alpha, m);
    st.gamma_exp = exponent_matrix(alpha, pd.beta_hat_inv);
    std::vector<std::vector<long long>> beta_dd(static_cast<size_t>(knew - m));
    for (int i = 0; i < knew - m; ++i) beta_dd[static_cast<size_t>(i)] = beta[static_cast<size_t>(pd.nonpivot[i])];
    st.delta_exp = exponent_matrix(beta_dd, pd.beta_hat_inv);

    for (int i = 0; i < m; ++i) {
        // k+ = eps^(-sum_j bhat_ji), k- = eps^(-sum_j bhat'_ji) over pivot rows.
        double se = 0.0, se_rev = 0.0;
        for (int j = 0; j < m; ++j) {
            int sp = n + pd.pivot[j];
            se += static_cast<double>(fwd[static_cast<size_t>(i)].source.coefficient(sp));
            se_rev += static_cast<double>(fwd[static_cast<size_t>(i)].target.coefficient(sp));
        }
        st.kplus_exp.push_back(-se);
        st.kminus_exp.push_back(-se_rev);
        st.fwd_reactions.push_back(rec.result_net.reaction_count());
        rec.result_net.reactions.push_back(fwd[static_cast<size_t>(i)]);
        st.rev_reactions.push_back(rec.result_net.reaction_count());
        rec.result_net.reactions.push_back({fwd[static_cast<size_t>(i)].target, fwd[static_cast<size_t>(i)].source});
    }
    rec.recipe.stages.push_back(std::move(st));
    finish_record(rec);
    return rec;
}

TransformRecord insert_intermediates(const ReactionNetwork& net,
                                     const InsertIntermediatesOp& op) {
    int m = static_cast<int>(op.targets.size());
    if (m == 0) fail(Code::BadParams, "insert_intermediates: no targets given");
    std::set<int> seen;
    for (const auto& t : op.targets) {
        if (t.reaction < 0 || t.reaction >= net.reaction_count())
            fail(Code::BadParams, "insert_intermediates: reaction index out of range");
        if (!seen.insert(t.reaction).second)
            fail(Code::BadParams,
                 "insert_intermediates: duplicate target reaction (duplicate the reaction "
                 "first, splitting its rate constant)");
    }

    // New species: first-mention order across the beta complexes.
    std::vector<std::string> new_names;
    for (const auto& t : op.targets)
        for (const auto& [name, coeff] : t.beta) {
            if (net.species_index(name) >= 0)
                fail(Code::BadParams, "insert_intermediates: " + name + " is not a new species");
            if (std::find(new_names.begin(), new_names.end(), name) == new_names.end())
                new_names.push_back(name);
        }
    int knew = static_cast<int>(new_names.size());
    if (knew == 0)
        fail(Code::RankDeficient,
             "insert_intermediates: intermediates over existing species only (beta rank 0 < m)");

    TransformRecord rec = base_record(net, op);
    rec.result_net = net;
    for (const auto& name : new_names) rec.result_net.add_species(name);
    int n = net.species_count();

    std::vector<Complex> c_cplx(static_cast<size_t>(m)), b_cplx(static_cast<size_t>(m));
    std::vector<std::vector<long long>> beta(static_cast<size_t>(knew),
                                             std::vector<long long>(static_cast<size_t>(m), 0));
    for (int i = 0; i < m; ++i) {
        const auto& t = op.targets[static_cast<size_t>(i)];
        c_cplx[static_cast<size_t>(i)] = resolve_complex(net, t.c, Code::BadParams, "insert_intermediates");
        bool empty = true;
        for (const auto& [name, coeff] : t.beta) {
            if (coeff < 0) fail(Code::BadParams, "insert_intermediates: negative stoichiometry");
            if (coeff == 0) continue;
            empty = false;
            int idx = rec.result_net.species_index(name);
            b_cplx[static_cast<size_t>(i)].add(idx, coeff);
            beta[static_cast<size_t>(idx - n)][static_cast<size_t>(i)] = coeff;
        }
        if (empty) fail(Code::EmptyIntermediate, "insert_intermediates: beta_i is empty");
    }
    PivotData pd = pivot_structure(beta, m, "insert_intermediates");

    RecipeStage st;
    st.kind = TransformKind::InsertIntermediates;
    st.n_before = n;
    st.n_after = n + knew;
    st.r_before = net.reaction_count();
    st.m = m;
    st.knew = knew;
    for (int j = 0; j < knew; ++j) st.new_species_abs.push_back(n + j);
    st.pivot = pd.pivot;
    st.nonpivot = pd.nonpivot;
    st.beta_hat_inv = to_eigen(pd.beta_hat_inv);
    st.beta_nonpivot = to_eigen(pd.beta_nonpivot);
    st.passthrough.assign(static_cast<size_t>(st.r_before), -1);
    st.target_original.resize(static_cast<size_t>(m));
    st.first_leg.resize(static_cast<size_t>(m));
    st.second_leg.resize(static_cast<size_t>(m));
    st.ksecond_exp.resize(static_cast<size_t>(m));
    st.target_source.resize(static_cast<size_t>(m));

    // alpha_i = c_i - b_i over old species; gamma = -(c beta_hat^{-1})^t.
    std::vector<std::vector<long long>> alpha(static_cast<size_t>(n),
                                              std::vector<long long>(static_cast<size_t>(m), 0));
    std::vector<std::vector<long long>> c_block(static_cast<size_t>(n),
                                                std::vector<long long>(static_cast<size_t>(m), 0));
    for (int i = 0; i < m; ++i) {
        const Reaction& orig = net.reactions[static_cast<size_t>(op.targets[static_cast<size_t>(i)].reaction)];
        for (int sidx = 0; sidx < n; ++sidx) {
            long long ci = c_cplx[static_cast<size_t>(i)].coefficient(sidx);
            c_block[static_cast<size_t>(sidx)][static_cast<size_t>(i)] = ci;
            alpha[static_cast<size_t>(sidx)][static_cast<size_t>(i)] = ci - orig.target.coefficient(sidx);
        }
    }
    st.alpha_d = to_eigen(alpha, m);
    st.gamma_exp = exponent_matrix(c_block, pd.beta_hat_inv);
    std::vector<std::vector<long long>> beta_dd(static_cast<size_t>(knew - m));
    for (int i = 0; i < knew - m; ++i) beta_dd[static_cast<size_t>(i)] = beta[static_cast<size_t>(pd.nonpivot[i])];
    st.delta_exp = exponent_matrix(beta_dd, pd.beta_hat_inv);
    st.v_exp = st.beta_hat_inv.transpose();

    // Rebuild the reaction list, splicing each target into its two-leg chain.
    std::map<int, int> target_pos;  // reaction index -> position in op.targets
    for (int i = 0; i < m; ++i) target_pos[op.targets[static_cast<size_t>(i)].reaction] = i;
    rec.result_net.reactions.clear();
    for (int j = 0; j < net.reaction_count(); ++j) {
        auto it = target_pos.find(j);
        if (it == target_pos.end()) {
            st.passthrough[static_cast<size_t>(j)] = rec.result_net.reaction_count();
            rec.result_net.reactions.push_back(net.reactions[static_cast<size_t>(j)]);
            continue;
        }
        int i = it->second;
        Complex mid = c_cplx[static_cast<size_t>(i)];
        for (const auto& [s, w] : b_cplx[static_cast<size_t>(i)].coeff) mid.add(s, w);
        st.target_original[static_cast<size_t>(i)] = j;
        st.first_leg[static_cast<size_t>(i)] = rec.result_net.reaction_count();
        rec.result_net.reactions.push_back({net.reactions[static_cast<size_t>(j)].source, mid});
        st.second_leg[static_cast<size_t>(i)] = rec.result_net.reaction_count();
        rec.result_net.reactions.push_back({mid, net.reactions[static_cast<size_t>(j)].target});
        double se = 0.0;
        for (int jj = 0; jj < m; ++jj)
            se += static_cast<double>(beta[static_cast<size_t>(pd.pivot[jj])][static_cast<size_t>(i)]);
        st.ksecond_exp[static_cast<size_t>(i)] = -se;
        for (const auto& [s, w] : net.reactions[static_cast<size_t>(j)].source.coeff)
            st.target_source[static_cast<size_t>(i)].emplace_back(s, w);
        rec.reaction_map[static_cast<size_t>(j)] = std::nullopt;
    }
    st.r_after = rec.result_net.reaction_count();

    // Re-point the surviving reactions through the splice.
    for (int j = 0; j < net.reaction_count(); ++j)
        if (rec.reaction_map[static_cast<size_t>(j)])
            rec.reaction_map[static_cast<size_t>(j)] = st.passthrough[static_cast<size_t>(j)];

    rec.recipe.stages.push_back(std::move(st));
    finish_record(rec);
    return rec;
}

TransformRecord add_enzyme_mechanism(const ReactionNetwork& net, const AddEnzymeMechanismOp& op) {
    int m = static_cast<int>(op.targets.size());
    if (m == 0) fail(Code::BadParams, "add_enzyme_mechanism: no targets");
    if (static_cast<int>(op.c.size()) != m || static_cast<int>(op.intermediates.size()) != m)
        fail(Code::BadParams, "add_enzyme_mechanism: c and intermediates must match targets");
    std::set<int> seen;
    for (int t : op.targets) {
        if (t < 0 || t >= net.reaction_count())
            fail(Code::BadParams, "add_enzyme_mechanism: reaction index out of range");
        if (!seen.insert(t).second) fail(Code::BadParams, "add_enzyme_mechanism: duplicate target");
    }
    std::set<std::string> names(op.intermediates.begin(), op.intermediates.end());
    names.insert(op.enzyme);
    if (static_cast<int>(names.size()) != m + 1)
        fail(Code::BadParams, "add_enzyme_mechanism: species names not distinct");

    // (1) the enzyme as a trivial species with multiplicity c_i
    std::vector<long long> s(static_cast<size_t>(net.reaction_count()), 0);
    for (int i = 0; i < m; ++i) s[static_cast<size_t>(op.targets[static_cast<size_t>(i)])] = op.c[static_cast<size_t>(i)];
    TransformRecord rec1 = add_trivial_species(net, op.enzyme, s);

    // (2) the intermediates I_i, one per target chain
    InsertIntermediatesOp iop;
    for (int i = 0; i < m; ++i)
        iop.targets.push_back({op.targets[static_cast<size_t>(i)], NamedComplex{},
                               NamedComplex{{op.intermediates[static_cast<size_t>(i)], 1}}});
    TransformRecord rec2 = insert_intermediates(rec1.result_net, iop);

    // (3) the dependent reverse reactions I_i -> c_i E + a_i . X
    ReactionNetwork cur = rec2.result_net;
    std::vector<TransformRecord> rec3;
    for (int i = 0; i < m; ++i) {
        const RecipeStage& st2 = rec2.recipe.stages.back();
        const Reaction& first = cur.reactions[static_cast<size_t>(st2.first_leg[static_cast<size_t>(i)])];
        rec3.push_back(add_dependent_reaction(cur, Reaction{first.target, first.source}));
        cur = rec3.back().result_net;
    }

    TransformRecord rec = base_record(net, op);
    rec.result_net = cur;
    rec.warnings = rec1.warnings;
    for (int j = 0; j < net.reaction_count(); ++j) {
        std::optional<int> mj = rec1.reaction_map[static_cast<size_t>(j)];
        if (mj) mj = rec2.reaction_map[static_cast<size_t>(*mj)];
        rec.reaction_map[static_cast<size_t>(j)] = mj;  // rec3 stages only append
    }
    rec.recipe.stages = rec1.recipe.stages;
    for (auto& st : rec2.recipe.stages) rec.recipe.stages.push_back(st);
    for (auto& r3 : rec3)
        for (auto& st : r3.recipe.stages) rec.recipe.stages.push_back(st);
    finish_record(rec);
    return rec;
}

TransformRecord apply_transform(const ReactionNetwork& net, const TransformOp& op) {
    return std::visit(
        [&](const auto& o) -> TransformRecord {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, AddDependentReactionOp>)
                return add_dependent_reaction(net, o.reaction);
            else if constexpr (std::is_same_v<T, FullyOpenExtensionOp>)
                return fully_open_extension(net, o.anchor);
            else if constexpr (std::is_same_v<T, AddTrivialSpeciesOp>)
                return add_trivial_species(net, o.name, o.s);
            else if constexpr (std::is_same_v<T, AddSpeciesWithFlowOp>)
                return add_species_with_flow(net, o.name, o.left_add, o.right_add);
            else if constexpr (std::is_same_v<T, AddReversibleNewSpeciesOp>)
                return add_reversible_new_species(net, o);
            else if constexpr (std::is_same_v<T, InsertIntermediatesOp>)
                return insert_intermediates(net, o);
            else
                return add_enzyme_mechanism(net, o);
        },
        op);
}

KineticModel duplicate_reaction(const KineticModel& model, int index, int parts) {
    if (index < 0 || index >= model.reaction_count())
        throw std::invalid_argument("duplicate_reaction: index out of range");
    if (parts < 2) throw std::invalid_argument("duplicate_reaction: parts must be >= 2");
    ReactionNetwork net = model.net;
    Reaction r = net.reactions[static_cast<size_t>(index)];
    std::vector<double> k;
    for (int j = 0; j < model.reaction_count(); ++j) {
        if (j == index) {
            for (int p = 0; p < parts; ++p) {
                if (p > 0) net.reactions.insert(net.reactions.begin() + index + p, r);
                k.push_back(model.k(j) / parts);
            }
        } else {
            k.push_back(model.k(j));
        }
    }
    return KineticModel::make(net, vecd(k));
}

std::vector<TransformOp> decompose_induced_extension(const ReactionNetwork& sub,
                                                     const ReactionNetwork& sup) {
    if (!is_fully_open(sub))
        fail(Code::NotFullyOpen, "decompose_induced_extension: sub is not fully open");
    if (!is_fully_open(sup))
        fail(Code::NotFullyOpen, "decompose_induced_extension: sup is not fully open");
    std::optional<Embedding> emb = is_induced_subnetwork(sub, sup);
    if (!emb) fail(Code::NotInduced, "decompose_induced_extension: not an induced subnetwork");

    std::vector<bool> species_present(static_cast<size_t>(sup.species_count()), false);
    std::vector<bool> reaction_present(static_cast<size_t>(sup.reaction_count()), false);
    for (int v : emb->species_map) species_present[static_cast<size_t>(v)] = true;
    for (int v : emb->reaction_map) reaction_present[static_cast<size_t>(v)] = true;

    // Current network state mirrored only through bookkeeping: which sup
    // reaction each current reaction realizes, and sup -> current species.
    std::vector<int> cur_reaction_sup(static_cast<size_t>(sub.reaction_count()));
    for (int j = 0; j < sub.reaction_count(); ++j)
        cur_reaction_sup[static_cast<size_t>(j)] = emb->reaction_map[static_cast<size_t>(j)];
    std::vector<int> sup_to_cur_species(static_cast<size_t>(sup.species_count()), -1);
    for (int u = 0; u < sub.species_count(); ++u)
        sup_to_cur_species[static_cast<size_t>(emb->species_map[static_cast<size_t>(u)])] = u;
    std::vector<std::string> cur_names = sub.species;
    auto fresh = [&cur_names](std::string name) {
        while (std::find(cur_names.begin(), cur_names.end(), name) != cur_names.end())
            name += "'";
        cur_names.push_back(name);
        return name;
    };

    std::vector<TransformOp> ops;
    for (int w = 0; w < sup.species_count(); ++w) {
        if (species_present[static_cast<size_t>(w)]) continue;
        AddSpeciesWithFlowOp o;
        o.name = fresh(sup.species[static_cast<size_t>(w)]);
        for (int sj : cur_reaction_sup) {
            o.left_add.push_back(sup.reactions[static_cast<size_t>(sj)].source.coefficient(w));
            o.right_add.push_back(sup.reactions[static_cast<size_t>(sj)].target.coefficient(w));
        }
        ops.push_back(o);
        sup_to_cur_species[static_cast<size_t>(w)] = static_cast<int>(cur_names.size()) - 1;
        species_present[static_cast<size_t>(w)] = true;
        // The two flow reactions realize sup's 0 <-> w (fully open => present).
        Complex wc;
        wc.add(w, 1);
        int sup_in = find_reaction(sup, {Complex{}, wc});
        int sup_out = find_reaction(sup, {wc, Complex{}});
        cur_reaction_sup.push_back(sup_in);
        cur_reaction_sup.push_back(sup_out);
        reaction_present[static_cast<size_t>(sup_in)] = true;
        reaction_present[static_cast<size_t>(sup_out)] = true;
    }

    for (int j = 0; j < sup.reaction_count(); ++j) {
        if (reaction_present[static_cast<size_t>(j)]) continue;
        Reaction r;
        for (const auto& [s, c] : sup.reactions[static_cast<size_t>(j)].source.coeff)
            r.source.add(sup_to_cur_species[static_cast<size_t>(s)], c);
        for (const auto& [s, c] : sup.reactions[static_cast<size_t>(j)].target.coeff)
            r.target.add(sup_to_cur_species[static_cast<size_t>(s)], c);
        ops.push_back(AddDependentReactionOp{r});
    }
    return ops;
}

}  // namespace crn
