#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "gbc/manifest.hpp"
#include "gbc/runner.hpp"

using namespace gbc;

namespace {

bool has_error(const ManifestParse& p, const std::string& needle) {
    for (const std::string& e : p.errors)
        if (e.find(needle) != std::string::npos) return true;
    return false;
}

std::string stable_body(const RunReport& rep) {
    nlohmann::ordered_json j = report_json(rep);
    j.erase("timing_ms");
    return j.dump(2);
}

int spawn(const std::string& args) {
    std::string cmd = std::string(GBC_CLI_PATH) + " " + args;
    int status = std::system(cmd.c_str());
    return (status >> 8) & 0xff;
}

} // namespace

TEST_CASE("manifest: valid description and recorded defaults") {
    ManifestParse p = parse_manifest(R"({
        "operation": "variation",
        "manifold": {"catalog": "sphere", "n": 3, "r": 1.0},
        "k": [1]
    })");
    REQUIRE(p.ok());
    CHECK(p.manifest.operation == Operation::variation);
    CHECK(p.manifest.k == std::vector<int>{1});
    CHECK(p.manifest.numeric.seed == 0); // defaulted and echoed
    nlohmann::ordered_json echo = p.manifest.echo();
    CHECK(echo["numeric"]["seed"] == 0);
    CHECK(echo["numeric"]["tolerance"] == 1e-3);
    CHECK(echo["manifold"]["catalog"] == "sphere");

    // identity suites resolve to an exact-algebra default tolerance
    ManifestParse q = parse_manifest(R"({"operation": "verify-identities", "n": 4})");
    REQUIRE(q.ok());
    CHECK(q.manifest.numeric.tolerance == 1e-10);
}

TEST_CASE("manifest: every validation error is collected") {
    ManifestParse p = parse_manifest(R"({
        "operation": "invariants",
        "manifold": {"catalog": "sphere", "n": 4, "radius": 2.0},
        "k": [1, 3],
        "numeric": {"quad_order": 1},
        "output": {"format": "xml"},
        "banana": true
    })");
    CHECK_FALSE(p.ok());
    CHECK(p.errors.size() >= 5);
    CHECK(has_error(p, "2k exceeds n"));
    CHECK(has_error(p, "unknown field 'radius'"));
    CHECK(has_error(p, "unknown field 'banana'"));
    CHECK(has_error(p, "quad_order"));
    CHECK(has_error(p, "'json' or 'csv'"));
}

TEST_CASE("manifest: operation field rules") {
    CHECK(has_error(parse_manifest(R"({"operation": "warp"})"), "unknown operation"));
    CHECK(has_error(parse_manifest(R"({"operation": "invariants", "k": [1]})"),
                    "requires a manifold"));
    CHECK(has_error(parse_manifest(R"({"operation": "einstein", "n": 4})"), "does not take n"));
    CHECK(has_error(parse_manifest(
                        R"({"operation": "gauss-bonnet", "n": 3})"), "even"));
    CHECK(has_error(parse_manifest(R"({"operation": "verify-identities", "n": 4,
                                       "manifold": {"catalog": "sphere", "n": 3}})"),
                    "does not take a manifold"));
    CHECK(has_error(parse_manifest("not json"), "not valid JSON"));
    CHECK(has_error(parse_manifest(R"({
        "operation": "invariants",
        "manifold": {"catalog": "mobius", "n": 3},
        "k": [1]
    })"),
                    "unknown catalog"));
    // amplitude beyond the SPD-safe range
    CHECK(has_error(parse_manifest(R"({
        "operation": "invariants",
        "manifold": {"catalog": "perturbed_sphere", "n": 3, "amplitude": 0.9},
        "k": [1]
    })"),
                    "amplitude"));
}

TEST_CASE("manifest: nested product charts") {
    ManifestParse p = parse_manifest(R"({
        "operation": "invariants",
        "manifold": {"catalog": "product",
                     "a": {"catalog": "sphere", "n": 2},
                     "b": {"catalog": "flat_torus", "n": 2}},
        "k": [1, 2]
    })");
    REQUIRE(p.ok());
    MetricChart chart = manifest_chart(p.manifest.manifold);
    CHECK(chart.dim == 4);

    // factor errors carry their path
    ManifestParse bad = parse_manifest(R"({
        "operation": "invariants",
        "manifold": {"catalog": "product",
                     "a": {"catalog": "sphere", "n": 5},
                     "b": {"catalog": "flat_torus", "n": 5}},
        "k": [1]
    })");
    CHECK(has_error(bad, "product dimension 10"));
}

TEST_CASE("runner: reports are deterministic up to timing") {
    ManifestParse p = parse_manifest(R"({
        "operation": "verify-identities", "n": 3,
        "numeric": {"trials": 5, "seed": 11}
    })");
    REQUIRE(p.ok());
    RunReport a = run(p.manifest);
    RunReport b = run(p.manifest);
    CHECK(a.all_pass());
    CHECK(a.exit_code() == 0);
    CHECK(stable_body(a) == stable_body(b));
}

TEST_CASE("runner: einstein suite passes against the closed forms") {
    ManifestParse p = parse_manifest(R"({"operation": "einstein"})");
    REQUIRE(p.ok());
    RunReport rep = run(p.manifest);
    CHECK(rep.exit_code() == 0);
    REQUIRE(rep.checks.size() == 1);
    CHECK(rep.checks[0].values.size() == 20); // lambda and residual per suite row
}

TEST_CASE("runner: failed checks keep the full report and flip the exit code") {
    ManifestParse p = parse_manifest(R"({
        "operation": "gauss-bonnet", "n": 2,
        "numeric": {"quad_order": 8, "tolerance": 1e-14, "amplitude": 0.1}
    })");
    REQUIRE(p.ok());
    RunReport rep = run(p.manifest);
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.exit_code() == 1);
    CHECK(rep.checks.size() == 2); // both checks ran and reported values
    for (const CheckRecord& c : rep.checks) CHECK_FALSE(c.values.empty());
}

TEST_CASE("runner: csv export carries one row per measured value") {
    ManifestParse p = parse_manifest(R"({"operation": "einstein"})");
    REQUIRE(p.ok());
    RunReport rep = run(p.manifest);
    std::string csv = report_text(rep, "csv");
    CHECK(csv.rfind("check,anchor,key,value,tolerance,pass,error\n", 0) == 0);
    std::size_t rows = 0;
    for (char c : csv) rows += c == '\n' ? 1 : 0;
    CHECK(rows == 1 + rep.checks[0].values.size());
}

TEST_CASE("command line: exit codes and report files") {
    // 0: a passing run, report written to a file
    std::string out = "/tmp/gbc_cli_test_report.json";
    CHECK(spawn("invariants --n 3 --r 1.0 --k 1 --quad-order 8 --out " + out +
                " > /dev/null 2>&1") == 0);
    std::ifstream in(out);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::ordered_json rep = nlohmann::ordered_json::parse(ss.str());
    CHECK(rep["operation"] == "invariants");
    CHECK(rep["total"] == 3);
    CHECK(rep["passed"] == 3);

    // 2: invalid parameters, rejected before any computation
    CHECK(spawn("invariants --n 3 --k 5 > /dev/null 2>&1") == 2);
    CHECK(spawn("variation --manifest /nonexistent.json > /dev/null 2>&1") == 2);
    CHECK(spawn("einstein --format xml > /dev/null 2>&1") == 2);

    // 1: checks ran but missed an impossible tolerance
    CHECK(spawn("gauss-bonnet --n 2 --quad-order 8 --tol 1e-14 > /dev/null 2>&1") == 1);

    // manifest file route matches inline flags
    std::string mpath = "/tmp/gbc_cli_test_manifest.json";
    {
        std::ofstream mf(mpath);
        mf << R"({"operation": "einstein"})";
    }
    CHECK(spawn("einstein --manifest " + mpath + " > /dev/null 2>&1") == 0);
    // mixing manifest and inline value flags is ambiguous
    CHECK(spawn("einstein --manifest " + mpath + " --seed 3 > /dev/null 2>&1") == 2);
}
