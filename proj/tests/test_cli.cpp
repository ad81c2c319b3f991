#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "crn/cli.hpp"

using crn::run_cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_tmp(const std::string& name, const std::string& text) {
    std::string path = name;
    std::ofstream f(path);
    f << text;
    return path;
}

}  // namespace

TEST_CASE("analyze: text and json output") {
    std::string path = write_tmp("cli_r0.crn", "X + 2Y -> 3Y\nY -> X\n");
    Run text = cli({"analyze", "--network", path});
    CHECK(text.code == 0);
    CHECK(text.out.find("rank 1") != std::string::npos);
    CHECK(text.out.find("conservation: 1 1") != std::string::npos);

    Run json = cli({"analyze", "--network", path, "--output", "json"});
    CHECK(json.code == 0);
    CHECK(json.out.find("\"rank\": 1") != std::string::npos);
    CHECK(json.out.find("\"species\"") != std::string::npos);
}

TEST_CASE("json output is byte-identical across runs with the same seed") {
    std::string path = write_tmp("cli_r0b.crn", "X + 2Y -> 3Y\nY -> X\n");
    std::vector<std::string> args = {"equilibria", "--network", path,    "--k",
                                     "1,1",        "--anchor",  "1.5,1.5", "--starts",
                                     "32",         "--seed",    "42",      "--output",
                                     "json"};
    Run a = cli(args);
    Run b = cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("NondegenerateStable") != std::string::npos);
}

TEST_CASE("classify subcommand") {
    std::string path = write_tmp("cli_r0c.crn", "X + 2Y -> 3Y\nY -> X\n");
    Run r = cli({"classify", "--network", path, "--k", "1,1", "--x",
                 "2.618033988749895,0.3819660112501051"});
    CHECK(r.code == 0);
    CHECK(r.out.find("NondegenerateUnstable") != std::string::npos);
}

TEST_CASE("transform subcommand applies ops and reports errors as JSON") {
    std::string path = write_tmp("cli_r0d.crn", "X + 2Y -> 3Y\nY -> X\n");
    Run ok = cli({"transform", "--network", path, "--op", "AddTrivialSpecies", "--params",
                  R"({"name":"Z","s":[1,2]})"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("X + 2Y + Z -> 3Y + Z") != std::string::npos);

    Run bad = cli({"transform", "--network", path, "--op", "AddDependentReaction", "--params",
                   R"({"reaction":"0 -> X"})", "--output", "json"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("IndependentReaction") != std::string::npos);
}

TEST_CASE("inherit subcommand lifts a witness") {
    std::string path = write_tmp("cli_r0e.crn", "X + 2Y -> 3Y\nY -> X\n");
    Run r = cli({"inherit", "--network", path, "--k", "1,1", "--p",
                 "2.618033988749895,0.3819660112501051", "--q",
                 "0.3819660112501051,2.618033988749895", "--op",
                 R"({"kind":"AddTrivialSpecies","name":"Z","s":[1,2]})", "--schedule",
                 "1e-1,1e-2,1e-3", "--output", "json"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"verdict\": \"MPNE\"") != std::string::npos);
}

TEST_CASE("fixtures subcommand runs and exits by pass/fail") {
    Run r = cli({"fixtures", "--run", "r2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("[PASS]") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("lemma2-demo runs a small sweep") {
    Run r = cli({"lemma2-demo", "--count", "10", "--seed", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("10/10") != std::string::npos);
    CHECK(r.out.find("HypothesisViolated") != std::string::npos);
}

TEST_CASE("chain fixture cache persists stage witnesses and resumes") {
    std::remove("chain_cache.json");
    Run first = cli({"fixtures", "--run", "mapk-chain", "--cache", "chain_cache.json"});
    CHECK(first.code == 0);
    std::ifstream cache("chain_cache.json");
    REQUIRE(cache.good());
    std::stringstream ss;
    ss << cache.rdbuf();
    CHECK(ss.str().find("\"stages\"") != std::string::npos);

    // resumed run re-certifies the stored witnesses and still passes
    Run second = cli({"fixtures", "--run", "mapk-chain", "--cache", "chain_cache.json"});
    CHECK(second.code == 0);
    CHECK(second.out.find("[FAIL]") == std::string::npos);
    std::remove("chain_cache.json");
}

TEST_CASE("usage and failure exit codes") {
    Run usage = cli({"equilibria", "--bogus"});
    CHECK(usage.code == 2);
    Run missing = cli({"analyze", "--network", "does_not_exist.crn"});
    CHECK(missing.code == 1);
    CHECK(missing.out.find("error") != std::string::npos);
    Run badfix = cli({"fixtures", "--run", "r99"});
    CHECK(badfix.code == 1);
}
