// fixtures.hpp: built-in regression cases — the extended-example networks
// R0..R12 (plus the R4'/R9' variants), the minimal cascade with its cubic
// reduction, and the six-stage cascade construction.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "crn/inheritance.hpp"
#include "crn/network.hpp"
#include "crn/transforms.hpp"

namespace crn::fixtures {

/// One checked expectation. Every numeric expectation carries a provenance
/// tag: "published" (a stated value), "definitional" (forced by the
/// definitions) or "derived" (computed by an independent oracle).
struct FactLine {
    std::string fact;
    std::string tag;
    bool pass = false;
    std::string expected;
    std::string actual;
};

struct FixtureReport {
    std::string id;
    bool pass = true;
    std::vector<FactLine> lines;
};

std::vector<std::string> fixture_ids();

/// DSL text of a fixture network ("r0".."r12", "r4'", "r9'", "mapk-a").
const std::string& fixture_dsl(const std::string& id);

/// Runs one fixture; cache_path (optional) lets the mapk-chain fixture
/// persist per-stage witnesses and resume.
FixtureReport run_fixture(const std::string& id, const std::string& cache_path = "");

// Shared building blocks, also used by the acceptance suite.
BaseWitness r0_witness(double conservation_total = 3.0);
ReactionNetwork mapk_a_network();
std::array<double, 6> mapk_a_constants();
BaseWitness mapk_a_witness();

/// The transform sequence from the minimal cascade to the full cascade with
/// feedback; stage_ends (optional) receives the one-past-the-end op index of
/// each of the six construction stages.
std::vector<TransformOp> mapk_chain_ops(std::vector<size_t>* stage_ends = nullptr);

/// The full cascade-with-feedback network, parsed directly from its reaction
/// list, for cross-checking the chain construction.
ReactionNetwork mapk_g_network();

}  // namespace crn::fixtures
