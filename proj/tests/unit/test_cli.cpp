#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hologen/cli.hpp"
#include "hologen/io.hpp"

using namespace hologen;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "hologen");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(HOLOGEN_FIXTURES) + "/" + name; }

}  // namespace

TEST_SUITE("cli") {

namespace {

// Finds the r = 0.5 row of a curve CSV and checks it against the -id oracle values.
void check_half_row(const std::string& csv) {
    const auto at = csv.find("\n0.5,");
    REQUIRE(at != std::string::npos);
    double r = 0, lhs = 0, sharp = 0, coarse = 0;
    REQUIRE(std::sscanf(csv.c_str() + at + 1, "%lf,%lf,%lf,%lf", &r, &lhs, &sharp, &coarse) == 4);
    CHECK(std::abs(lhs - 0.5) <= 1e-12);
    CHECK(std::abs(sharp - 6.58655219198974138) <= 1e-12 * 6.6);
    CHECK(std::abs(coarse - 6.59882904934945013) <= 1e-12 * 6.6);
}

}  // namespace

TEST_CASE("certify-gen on -id") {
    const auto r = run_cli({"certify-gen", fixture("minus_id.json"), "--no-timestamp"});
    CHECK(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["result"]["verdict"] == "certified");
    CHECK_FALSE(j.contains("generated_at"));
}

TEST_CASE("numrange on diag(1, -2)") {
    const auto r = run_cli({"numrange", fixture("diag_1_m2.json"), "--p", "2", "--no-timestamp"});
    CHECK(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["result"]["m"].get<double>() == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(j["result"]["V"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("bound on -id writes the curve") {
    const std::string csv = "cli_test_curve.csv";
    const auto r = run_cli({"bound", fixture("minus_id.json"), "--curve", csv, "--no-timestamp"});
    CHECK(r.code == 0);
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    check_half_row(ss.str());
    std::remove(csv.c_str());
}

TEST_CASE("bound refuses non-certified maps before the bound stage") {
    const auto r = run_cli({"bound", fixture("identity.json"), "--no-timestamp", "--epsilon", "0.1"});
    // z -> z is pseudo-dissipative, so the bound runs on its certificate
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["result"]["form"] == "pseudo-dissipative");
}

TEST_CASE("flow escape is a violation") {
    const auto r = run_cli({"flow", fixture("identity.json"), "--z0", "0.5", "0", "--t", "2",
                            "--no-timestamp"});
    CHECK(r.code == 1);
    const auto j = Json::parse(r.out);
    CHECK(j["result"]["status"] == "escaped");
    CHECK(j["result"]["stop_time"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("flow accepts complex literals") {
    const auto r = run_cli({"flow", fixture("minus_id.json"), "--z0", "0.3+0.1i", "-0.2i", "--t",
                            "1", "--no-timestamp"});
    CHECK(r.code == 0);
    const auto j = Json::parse(r.out);
    const double re = j["result"]["endpoint"][0][0].get<double>();
    CHECK(re == doctest::Approx(0.3 * std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("sample-gen output is a loadable generator map") {
    const auto r = run_cli({"sample-gen", "--n", "2", "--seed", "3", "--degree", "4", "--p", "inf"});
    CHECK(r.code == 0);
    const auto map = parse_map(parse_json_text(r.out));
    CHECK(map.space() == NormedSpace::infinity(2));
    CHECK(certify_generator(map).verdict == Verdict::Certified);
}

TEST_CASE("identical runs are byte-identical") {
    const std::vector<std::string> args = {"certify-pd", fixture("minus_id.json"), "--no-timestamp",
                                           "--seed", "4"};
    CHECK(run_cli(args).out == run_cli(args).out);
}

TEST_CASE("HOLOGEN_SEED sets the default seed") {
    setenv("HOLOGEN_SEED", "17", 1);
    auto r = run_cli({"certify-gen", fixture("minus_id.json"), "--no-timestamp"});
    CHECK(Json::parse(r.out)["seed"] == 17);
    r = run_cli({"certify-gen", fixture("minus_id.json"), "--no-timestamp", "--seed", "2"});
    CHECK(Json::parse(r.out)["seed"] == 2);
    setenv("HOLOGEN_SEED", "x", 1);
    CHECK(run_cli({"certify-gen", fixture("minus_id.json")}).code == 2);
    unsetenv("HOLOGEN_SEED");
}

TEST_CASE("usage and input errors exit with 2") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"certify-gen"}).code == 2);
    CHECK(run_cli({"certify-gen", fixture("does_not_exist.json")}).code == 2);
    const auto bad = run_cli({"certify-gen", fixture("malformed.json")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("malformed.json:5:") != std::string::npos);
    CHECK(run_cli({"flow", fixture("minus_id.json"), "--z0", "0.1", "--t", "1"}).code == 2);
    CHECK(run_cli({"flow", fixture("minus_id.json"), "--z0", "abc", "0", "--t", "1"}).code == 2);
    CHECK(run_cli({"numrange", fixture("diag_1_m2.json"), "--p", "0.3"}).code == 2);
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli({"--help"}).code == 0);
}

}
