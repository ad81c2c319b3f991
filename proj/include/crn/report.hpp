// report.hpp: JSON serialization of networks, structures and certificates.
// Key order is fixed (ordered_json) so identical inputs give byte-identical
// output.

#pragma once

#include <json.hpp>

#include "crn/equilibria.hpp"
#include "crn/inheritance.hpp"
#include "crn/kinetics.hpp"
#include "crn/network.hpp"
#include "crn/stoichiometry.hpp"
#include "crn/transforms.hpp"

namespace crn {

using Json = nlohmann::ordered_json;

Json to_json(const ReactionNetwork& net);
Json to_json(const ReactionNetwork& net, const StoichiometricStructure& st);
Json to_json(const Classification& c);
Json to_json(const EquilibriumPoint& p);
Json to_json(const CompatibilityCheck& c);
Json to_json(const MpneCertificate& cert);
Json to_json(const RecipeStage& st);
Json to_json(const TransformRecord& rec);
Json to_json(const LiftedWitness& w);

/// The report document: {network, structure: {rank, conservation}, certificates}.
Json analysis_report(const ReactionNetwork& net, const StoichiometricStructure& st,
                     const Json& certificates);

Json vector_json(const Eigen::VectorXd& v);
Json matrix_json(const Eigen::MatrixXd& m);  // row-major nested arrays

}  // namespace crn
