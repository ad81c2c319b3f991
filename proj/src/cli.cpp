#include "crn/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "crn/dsl.hpp"
#include "crn/eig.hpp"
#include "crn/equilibria.hpp"
#include "crn/fixtures.hpp"
#include "crn/graph.hpp"
#include "crn/inheritance.hpp"
#include "crn/report.hpp"
#include "crn/transforms.hpp"

namespace crn {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Eigen::VectorXd parse_csv_vector(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        vals.push_back(std::stod(item));
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
    return v;
}

std::vector<double> parse_csv_list(const std::string& text) {
    Eigen::VectorXd v = parse_csv_vector(text);
    return {v.data(), v.data() + v.size()};
}

NamedComplex named_complex_from(const std::string& text) {
    ReactionNetwork tmp;
    Complex c = parse_complex(text, tmp, true);
    NamedComplex out;
    for (const auto& [idx, coeff] : c.coeff) out[tmp.species[static_cast<size_t>(idx)]] = coeff;
    return out;
}

Reaction reaction_over(const ReactionNetwork& net, const std::string& stmt) {
    auto pos = stmt.find("->");
    if (pos == std::string::npos) throw std::runtime_error("reaction needs '->': " + stmt);
    ReactionNetwork tmp = net;
    Reaction r;
    r.source = parse_complex(stmt.substr(0, pos), tmp, false);
    r.target = parse_complex(stmt.substr(pos + 2), tmp, false);
    return r;
}

TransformOp op_from_json(const ReactionNetwork& net, const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "AddDependentReaction")
        return AddDependentReactionOp{reaction_over(net, j.at("reaction").get<std::string>())};
    if (kind == "FullyOpenExtension") {
        FullyOpenExtensionOp op;
        if (j.contains("anchor")) {
            auto a = j["anchor"].get<std::vector<double>>();
            op.anchor = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
        }
        return op;
    }
    if (kind == "AddTrivialSpecies")
        return AddTrivialSpeciesOp{j.at("name").get<std::string>(),
                                   j.at("s").get<std::vector<long long>>()};
    if (kind == "AddSpeciesWithFlow")
        return AddSpeciesWithFlowOp{j.at("name").get<std::string>(),
                                    j.at("left").get<std::vector<long long>>(),
                                    j.at("right").get<std::vector<long long>>()};
    if (kind == "AddReversibleNewSpecies") {
        AddReversibleNewSpeciesOp op;
        op.new_species = j.at("new_species").get<std::vector<std::string>>();
        for (const auto& p : j.at("pairs"))
            op.pairs.push_back({named_complex_from(p.at("left").get<std::string>()),
                                named_complex_from(p.at("right").get<std::string>())});
        return op;
    }
    if (kind == "InsertIntermediates") {
        InsertIntermediatesOp op;
        for (const auto& t : j.at("targets"))
            op.targets.push_back({t.at("reaction").get<int>(),
                                  named_complex_from(t.value("c", std::string("0"))),
                                  named_complex_from(t.at("beta").get<std::string>())});
        return op;
    }
    if (kind == "AddEnzymeMechanism")
        return AddEnzymeMechanismOp{j.at("targets").get<std::vector<int>>(),
                                    j.at("enzyme").get<std::string>(),
                                    j.at("c").get<std::vector<long long>>(),
                                    j.at("intermediates").get<std::vector<std::string>>()};
    throw std::runtime_error("unknown transform kind: " + kind);
}

struct Output {
    bool json = false;
    std::ostream& out;
    void emit(const Json& j, const std::string& text) {
        if (json)
            out << j.dump(2) << "\n";
        else
            out << text;
    }
};

std::uint64_t seed_or_env(std::uint64_t seed, bool seed_set) {
    if (seed_set) return seed;
    if (const char* env = std::getenv("CRN_MULTISTAT_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

// Deterministic random instance for the block-Hurwitz demonstration.
struct Lemma2Instance {
    Eigen::MatrixXd a0, d0, b0, c0;
    double growth_b, growth_c;
};

Eigen::MatrixXd shifted_hurwitz(int n, std::mt19937_64& rng, double margin) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    double shift = max_real_part(eigenvalues(m)) + margin;
    return m - shift * Eigen::MatrixXd::Identity(n, n);
}

Lemma2Instance lemma2_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(1, 4);
    std::uniform_real_distribution<double> margin(0.5, 1.5);
    std::uniform_real_distribution<double> small(-0.5, 0.5);
    std::uniform_real_distribution<double> growth(0.0, 0.3);
    Lemma2Instance inst;
    int n = dim(rng), m = dim(rng);
    inst.a0 = shifted_hurwitz(n, rng, margin(rng));
    inst.d0 = shifted_hurwitz(m, rng, margin(rng));
    inst.b0.resize(n, m);
    inst.c0.resize(m, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) inst.b0(i, j) = small(rng);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) inst.c0(i, j) = small(rng);
    inst.growth_b = growth(rng);
    inst.growth_c = growth(rng);
    return inst;
}

HurwitzTestResult run_lemma2_instance(const Lemma2Instance& inst,
                                      const std::vector<double>& eps) {
    auto bfam = [&inst](double e) { return Eigen::MatrixXd(inst.b0 * std::pow(e, -inst.growth_b)); };
    auto cfam = [&inst](double e) { return Eigen::MatrixXd(inst.c0 * std::pow(e, -inst.growth_c)); };
    return hurwitz_block_limit_test(inst.a0, inst.d0, bfam, cfam, eps);
}

int cmd_inspect(const std::string& path, Output& o) {
    ReactionNetwork net = parse_network(read_file(path));
    PetriNetGraph g = petri_net_graph(net);
    Json j;
    j["network"] = to_json(net);
    Json arcs = Json::array();
    for (const auto& a : g.arcs) {
        Json e;
        e["species"] = a.species;
        e["reaction"] = a.reaction;
        e["weight"] = a.weight;
        e["direction"] = a.species_to_reaction ? "species->reaction" : "reaction->species";
        arcs.push_back(std::move(e));
    }
    j["petri_net"] = Json{{"species_vertices", g.species_vertices},
                          {"reaction_vertices", g.reaction_vertices},
                          {"arcs", std::move(arcs)}};
    std::ostringstream text;
    text << render_network(net) << "\n"
         << net.species_count() << " species, " << net.reaction_count() << " reactions, "
         << g.arcs.size() << " PN arcs\n";
    o.emit(j, text.str());
    return 0;
}

int cmd_analyze(const std::string& path, Output& o) {
    ReactionNetwork net = parse_network(read_file(path));
    auto st = stoichiometric_structure(net);
    Json j = analysis_report(net, st, Json::array());
    std::ostringstream text;
    text << "rank " << st.rank << "\n";
    for (const auto& row : st.conservation) {
        text << "conservation:";
        for (long long v : row) text << " " << v;
        text << "\n";
    }
    o.emit(j, text.str());
    return 0;
}

int cmd_equilibria(const std::string& path, const std::string& k_csv,
                   const std::string& anchor_csv, int starts, std::uint64_t seed,
                   const std::string& box_lo, const std::string& box_hi, Output& o) {
    ReactionNetwork net = parse_network(read_file(path));
    KineticModel model = KineticModel::make(net, parse_csv_vector(k_csv));
    Eigen::VectorXd anchor = parse_csv_vector(anchor_csv);
    MultistartOptions opts;
    opts.n_starts = starts;
    opts.seed = seed;
    if (!box_lo.empty()) opts.box_lo = parse_csv_vector(box_lo);
    if (!box_hi.empty()) opts.box_hi = parse_csv_vector(box_hi);
    auto found = multistart_search(model, anchor, opts);
    Json certs = Json::array();
    for (const auto& p : found) certs.push_back(to_json(p));
    Json j = analysis_report(net, model.structure, certs);
    std::ostringstream text;
    text << "found " << found.size() << " equilibria\n";
    for (const auto& p : found) {
        text << " ";
        for (int i = 0; i < p.x.size(); ++i) text << " " << p.x(i);
        text << "  [" << to_string(p.classification.verdict) << "]\n";
    }
    o.emit(j, text.str());
    return 0;
}

int cmd_classify(const std::string& path, const std::string& k_csv, const std::string& x_csv,
                 Output& o) {
    ReactionNetwork net = parse_network(read_file(path));
    KineticModel model = KineticModel::make(net, parse_csv_vector(k_csv));
    Classification c = classify_equilibrium(model, parse_csv_vector(x_csv));
    std::ostringstream text;
    text << to_string(c.verdict) << "  residual " << c.residual_norm << "  reduced det "
         << c.reduced_det << "\n";
    o.emit(to_json(c), text.str());
    return 0;
}

int cmd_transform(const std::string& path, const std::string& op_name, const std::string& params,
                  Output& o) {
    ReactionNetwork net = parse_network(read_file(path));
    Json pj = params.empty() ? Json::object() : Json::parse(params);
    pj["kind"] = op_name;
    TransformRecord rec = apply_transform(net, op_from_json(net, pj));
    Json j = to_json(rec);
    std::ostringstream text;
    text << render_network(rec.result_net) << "\n";
    for (const auto& w : rec.warnings) text << "warning: " << w << "\n";
    o.emit(j, text.str());
    return 0;
}

int cmd_inherit(const std::string& path, const std::string& k_csv, const std::string& p_csv,
                const std::string& q_csv, const std::string& op_json,
                const std::string& schedule_csv, Output& o) {
    ReactionNetwork net = parse_network(read_file(path));
    KineticModel model = KineticModel::make(net, parse_csv_vector(k_csv));
    BaseWitness base =
        make_base_witness(model, parse_csv_vector(p_csv), parse_csv_vector(q_csv));
    TransformOp op = op_from_json(net, Json::parse(op_json));
    TransformRecord rec = apply_transform(net, op);
    std::vector<double> schedule =
        schedule_csv.empty() ? kDefaultSchedule : parse_csv_list(schedule_csv);
    LiftedWitness lw = lift_witness(base, rec, schedule);
    Json j = to_json(lw);
    j["record"] = to_json(rec);
    std::ostringstream text;
    text << "lift " << to_string(lw.status) << ", last good eps " << lw.last_good_eps << "\n";
    if (lw.final) text << "final certificate: " << to_string(lw.final->verdict) << "\n";
    o.emit(j, text.str());
    return lw.final && lw.final->verdict != CertificateVerdict::Failed ? 0 : 1;
}

int cmd_fixtures(const std::string& run_id, const std::string& cache, Output& o) {
    std::vector<std::string> ids;
    if (run_id == "all")
        ids = fixtures::fixture_ids();
    else
        ids.push_back(run_id);
    bool all_pass = true;
    Json jreports = Json::array();
    std::ostringstream text;
    for (const auto& id : ids) {
        fixtures::FixtureReport rep = fixtures::run_fixture(id, cache);
        all_pass = all_pass && rep.pass;
        Json jr;
        jr["id"] = rep.id;
        jr["pass"] = rep.pass;
        Json lines = Json::array();
        for (const auto& l : rep.lines) {
            Json e;
            e["fact"] = l.fact;
            e["tag"] = l.tag;
            e["pass"] = l.pass;
            e["expected"] = l.expected;
            e["actual"] = l.actual;
            lines.push_back(std::move(e));
            text << (l.pass ? "[PASS] " : "[FAIL] ") << rep.id << ": " << l.fact << " [" << l.tag
                 << "]";
            if (!l.pass) text << "  expected " << l.expected << ", got " << l.actual;
            text << "\n";
        }
        jr["facts"] = std::move(lines);
        jreports.push_back(std::move(jr));
    }
    o.emit(jreports, text.str());
    return all_pass ? 0 : 1;
}

int cmd_lemma2(int count, std::uint64_t seed, const std::string& eps_csv, Output& o) {
    std::vector<double> eps = eps_csv.empty() ? std::vector<double>{1e-3, 1e-4}
                                              : parse_csv_list(eps_csv);
    int hurwitz = 0;
    std::vector<std::uint64_t> failures;
    for (int i = 0; i < count; ++i) {
        auto r = run_lemma2_instance(lemma2_instance(seed + static_cast<std::uint64_t>(i)), eps);
        if (r.outcome == HurwitzTestOutcome::AllHurwitz)
            ++hurwitz;
        else
            failures.push_back(seed + static_cast<std::uint64_t>(i));
    }
    // Hypothesis-violation demonstration: A0 with an eigenvalue at +1.
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
    bad(1, 1) = -1.0;
    Eigen::MatrixXd d0 = -Eigen::MatrixXd::Identity(2, 2);
    auto zero = [](double) { return Eigen::MatrixXd::Zero(2, 2).eval(); };
    HurwitzTestResult viol = hurwitz_block_limit_test(bad, d0, zero, zero, eps);

    Json j;
    j["instances"] = count;
    j["hurwitz"] = hurwitz;
    j["failing_seeds"] = failures;
    j["hypothesis_check"] = Json{{"outcome", to_string(viol.outcome)}, {"detail", viol.detail}};
    std::ostringstream text;
    text << hurwitz << "/" << count << " random instances Hurwitz for all supplied eps\n"
         << "hypothesis violation demo: " << to_string(viol.outcome) << " (" << viol.detail
         << ")\n";
    o.emit(j, text.str());
    return hurwitz == count && viol.outcome == HurwitzTestOutcome::HypothesisViolated ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"chemical reaction network multistationarity toolkit"};
    app.require_subcommand(1);
    std::string output_mode = "text";
    app.add_option("--output", output_mode, "output format: json|text")
        ->check(CLI::IsMember({"json", "text"}));
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--seed", seed, "random seed (fallback: CRN_MULTISTAT_SEED)")
        ->each([&seed_set](const std::string&) { seed_set = true; });

    std::string network, k_csv, anchor_csv, x_csv, p_csv, q_csv;
    std::string op_name, params, op_json, schedule_csv, box_lo, box_hi, run_id, cache, eps_csv;
    int starts = 64;
    int count = 200;

    CLI::App* c_inspect = app.add_subcommand("inspect", "parse and echo a network");
    c_inspect->add_option("--network", network, "network file (.crn)")->required();

    CLI::App* c_analyze = app.add_subcommand("analyze", "stoichiometric structure");
    c_analyze->add_option("--network", network)->required();

    CLI::App* c_eq = app.add_subcommand("equilibria", "multistart equilibrium search");
    c_eq->add_option("--network", network)->required();
    c_eq->add_option("--k", k_csv, "rate constants, comma separated")->required();
    c_eq->add_option("--anchor", anchor_csv, "stoichiometry class anchor")->required();
    c_eq->add_option("--starts", starts, "number of starts");
    c_eq->add_option("--box-lo", box_lo, "per-species lower bounds");
    c_eq->add_option("--box-hi", box_hi, "per-species upper bounds");

    CLI::App* c_cl = app.add_subcommand("classify", "classify a point");
    c_cl->add_option("--network", network)->required();
    c_cl->add_option("--k", k_csv)->required();
    c_cl->add_option("--x", x_csv, "point to classify")->required();

    CLI::App* c_tr = app.add_subcommand("transform", "apply an enlargement operation");
    c_tr->add_option("--network", network)->required();
    c_tr->add_option("--op", op_name, "operation name")->required();
    c_tr->add_option("--params", params, "operation parameters as JSON");

    CLI::App* c_in = app.add_subcommand("inherit", "lift an MPNE/MPSE witness");
    c_in->add_option("--network", network)->required();
    c_in->add_option("--k", k_csv)->required();
    c_in->add_option("--p", p_csv)->required();
    c_in->add_option("--q", q_csv)->required();
    c_in->add_option("--op", op_json, "operation as JSON, e.g. {\"kind\":...}")->required();
    c_in->add_option("--schedule", schedule_csv, "epsilon schedule, comma separated");

    CLI::App* c_fx = app.add_subcommand("fixtures", "run built-in regression fixtures");
    c_fx->add_option("--run", run_id, "fixture id or 'all'")->required();
    c_fx->add_option("--cache", cache, "witness cache file for mapk-chain");

    CLI::App* c_l2 = app.add_subcommand("lemma2-demo", "block-Hurwitz limit demonstration");
    c_l2->add_option("--count", count, "number of random instances");
    c_l2->add_option("--eps", eps_csv, "epsilon values, comma separated");

    for (CLI::App* sub : {c_inspect, c_analyze, c_eq, c_cl, c_tr, c_in, c_fx, c_l2})
        sub->fallthrough();

    std::vector<char*> argv;
    std::vector<std::string> argstore = args;
    std::string prog = "crn";
    argv.push_back(prog.data());
    for (auto& a : argstore) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream dummy;
        int code = app.exit(e, dummy, dummy);
        if (code == 0) {
            out << dummy.str();
            return 0;
        }
        err << dummy.str();
        return 2;
    }

    Output o{output_mode == "json", out};
    try {
        if (c_inspect->parsed()) return cmd_inspect(network, o);
        if (c_analyze->parsed()) return cmd_analyze(network, o);
        if (c_eq->parsed())
            return cmd_equilibria(network, k_csv, anchor_csv, starts, seed_or_env(seed, seed_set),
                                  box_lo, box_hi, o);
        if (c_cl->parsed()) return cmd_classify(network, k_csv, x_csv, o);
        if (c_tr->parsed()) return cmd_transform(network, op_name, params, o);
        if (c_in->parsed())
            return cmd_inherit(network, k_csv, p_csv, q_csv, op_json, schedule_csv, o);
        if (c_fx->parsed()) return cmd_fixtures(run_id, cache, o);
        if (c_l2->parsed()) return cmd_lemma2(count, seed_or_env(seed, seed_set), eps_csv, o);
        err << "no subcommand\n";
        return 2;
    } catch (const TransformError& e) {
        Json j;
        j["error"] = Json{{"type", to_string(e.code)}, {"message", e.what()}};
        out << j.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        Json j;
        j["error"] = Json{{"type", "error"}, {"message", e.what()}};
        out << j.dump(2) << "\n";
        return 1;
    }
}

}  // namespace crn
