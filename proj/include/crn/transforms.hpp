// transforms.hpp: network enlargement operations with exact precondition
// checks. Each operation returns a TransformRecord holding the enlarged
// network, index maps, and the rate recipe that instantiates mass-action
// constants for any epsilon in (0, 1] so that witness pairs lift.

#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "crn/kinetics.hpp"
#include "crn/network.hpp"

namespace crn {

struct TransformError : std::runtime_error {
    enum class Code {
        IndependentReaction,
        RankDeficient,
        EmptyIntermediate,
        NotInduced,
        NotFullyOpen,
        BadParams,
    };
    Code code;
    TransformError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

std::string to_string(TransformError::Code c);

enum class TransformKind {
    AddDependentReaction,
    FullyOpenExtension,
    AddTrivialSpecies,
    AddSpeciesWithFlow,
    AddReversibleNewSpecies,
    InsertIntermediates,
    AddEnzymeMechanism,
};

std::string to_string(TransformKind k);

// ---- operation parameters ------------------------------------------------

using NamedComplex = std::map<std::string, long long>;  // species name -> coefficient

struct AddDependentReactionOp {
    Reaction reaction;  // over the source network's species indices
};

struct FullyOpenExtensionOp {
    Eigen::VectorXd anchor;  // x-hat; empty means "use the witness point"
};

struct AddTrivialSpeciesOp {
    std::string name;
    std::vector<long long> s;  // per-reaction stoichiometry, both sides
};

struct AddSpeciesWithFlowOp {
    std::string name;
    std::vector<long long> left_add;
    std::vector<long long> right_add;
};

struct AddReversibleNewSpeciesOp {
    struct Pair {
        NamedComplex left;
        NamedComplex right;
    };
    std::vector<std::string> new_species;
    std::vector<Pair> pairs;  // each stored as forward (left->right) then reverse
};

struct InsertIntermediatesOp {
    struct Target {
        int reaction;
        NamedComplex c;     // over existing species
        NamedComplex beta;  // over new species (names collected first-mention)
    };
    std::vector<Target> targets;
};

struct AddEnzymeMechanismOp {
    std::vector<int> targets;
    std::string enzyme;
    std::vector<long long> c;  // enzyme multiplicity per target
    std::vector<std::string> intermediates;
};

using TransformOp =
    std::variant<AddDependentReactionOp, FullyOpenExtensionOp, AddTrivialSpeciesOp,
                 AddSpeciesWithFlowOp, AddReversibleNewSpeciesOp, InsertIntermediatesOp,
                 AddEnzymeMechanismOp>;

TransformKind kind_of(const TransformOp& op);

// ---- rate recipes ----------------------------------------------------------

/// One construction step of a recipe. Composite operations (enzyme
/// mechanisms) chain several stages; instantiation threads the rate vector
/// through them with a shared epsilon.
struct RecipeStage {
    TransformKind kind;
    int n_before = 0, n_after = 0;
    int r_before = 0, r_after = 0;

    // result index of each incoming reaction; -1 when replaced by a chain
    std::vector<int> passthrough;

    // AddDependentReaction: constants set to eps
    std::vector<int> eps_reactions;

    // FullyOpenExtension: inflow eps * xhat_i, outflow eps
    struct FlowEntry {
        int reaction;
        int species;
        bool inflow;
    };
    std::vector<FlowEntry> flows;
    Eigen::VectorXd anchor;  // empty => witness point supplied at lift time

    // AddSpeciesWithFlow: both constants 1/eps
    std::vector<int> inv_eps_reactions;

    // Shared by AddReversibleNewSpecies / InsertIntermediates
    int m = 0;     // number of added reversible reactions / split reactions
    int knew = 0;  // number of new species
    std::vector<int> new_species_abs;  // absolute indices in the result network
    std::vector<int> pivot;            // into new_species_abs, pivot order
    std::vector<int> nonpivot;
    Eigen::MatrixXd beta_hat_inv;   // m x m
    Eigen::MatrixXd beta_nonpivot;  // (knew-m) x m
    Eigen::MatrixXd alpha_d;        // n_before x m (old-species block of the new columns)
    Eigen::MatrixXd gamma_exp;      // m x n_before
    Eigen::MatrixXd delta_exp;      // m x (knew-m)

    // AddReversibleNewSpecies: constants eps^kplus_exp / eps^kminus_exp
    std::vector<int> fwd_reactions, rev_reactions;
    std::vector<double> kplus_exp, kminus_exp;

    // InsertIntermediates: first leg inherits the split reaction's constant,
    // second leg gets eps^ksecond_exp
    std::vector<int> target_original;
    std::vector<int> first_leg, second_leg;
    std::vector<double> ksecond_exp;
    Eigen::MatrixXd v_exp;  // m x m, exponents of V(x) = v_targets(x)^(beta_hat^-T)
    std::vector<std::vector<std::pair<int, long long>>> target_source;
};

struct RateRecipe {
    std::vector<RecipeStage> stages;

    /// Full rate-constant vector for the result network. `witness_anchor`
    /// backs a FullyOpenExtension stage whose anchor was left open.
    Eigen::VectorXd instantiate(const Eigen::VectorXd& base_k, double eps,
                                const Eigen::VectorXd* witness_anchor = nullptr) const;
};

/// One stage of RateRecipe::instantiate, exposed so the inheritance module
/// can thread rate vectors and embedded points through a chain in lockstep.
Eigen::VectorXd instantiate_stage(const RecipeStage& st, const Eigen::VectorXd& k, double eps,
                                  const Eigen::VectorXd* witness_anchor = nullptr);

// ---- records ---------------------------------------------------------------

struct TransformRecord {
    TransformOp op;
    ReactionNetwork source_net;
    ReactionNetwork result_net;
    std::vector<int> species_map;                  // injection, source -> result
    std::vector<std::optional<int>> reaction_map;  // nullopt for replaced reactions
    std::vector<int> new_species;
    std::vector<int> new_reactions;
    RateRecipe recipe;
    std::vector<std::string> warnings;
};

// ---- the seven operations --------------------------------------------------

/// Adds a reaction whose vector lies in im Gamma (exact dependence check).
TransformRecord add_dependent_reaction(const ReactionNetwork& net, const Reaction& r);

/// Adjoins the missing inflow/outflow reactions 0 <-> X_i.
TransformRecord fully_open_extension(const ReactionNetwork& net,
                                     const Eigen::VectorXd& anchor = Eigen::VectorXd());

/// Adds a species with identical stoichiometry on both sides of each
/// reaction it enters.
TransformRecord add_trivial_species(const ReactionNetwork& net, const std::string& name,
                                    const std::vector<long long>& s);

/// Adds a species arbitrarily into reactions plus its 0 <-> Y flow.
TransformRecord add_species_with_flow(const ReactionNetwork& net, const std::string& name,
                                      const std::vector<long long>& left_add,
                                      const std::vector<long long>& right_add);

/// Adds reversible reactions over new species whose net
/// stoichiometry block beta has full column rank (exact check).
TransformRecord add_reversible_new_species(const ReactionNetwork& net,
                                           const AddReversibleNewSpeciesOp& op);

/// Splits reactions with intermediate complexes c_i.X + beta_i.Y,
/// beta of full column rank (exact check).
TransformRecord insert_intermediates(const ReactionNetwork& net,
                                     const InsertIntermediatesOp& op);

/// Enzyme mechanism c_i E + a_i.X <-> I_i -> c_i E + b_i.X, composed from the
/// trivial-species, intermediate and dependent-reaction operations.
TransformRecord add_enzyme_mechanism(const ReactionNetwork& net, const AddEnzymeMechanismOp& op);

TransformRecord apply_transform(const ReactionNetwork& net, const TransformOp& op);

/// Splits reaction `index` into `parts` identical copies, each with 1/parts
/// of its rate constant, so one reaction can acquire several intermediates.
KineticModel duplicate_reaction(const KineticModel& model, int index, int parts);

/// For two fully open networks with sub an induced subnetwork of sup,
/// produces the species-with-flow and dependent-reaction operations whose
/// composition maps sub onto sup up to isomorphism.
std::vector<TransformOp> decompose_induced_extension(const ReactionNetwork& sub,
                                                     const ReactionNetwork& sup);

}  // namespace crn
