#include <cmath>
#include <cstdio>
#include <doctest.h>

#include <string>

#include "hologen/io.hpp"

using namespace hologen;

TEST_SUITE("io") {

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

TEST_CASE("space descriptors round-trip") {
    for (const auto& s : {NormedSpace(3, 2.0), NormedSpace(2, 1.0), NormedSpace::infinity(4),
                          NormedSpace(1, 2.5)}) {
        CHECK(parse_space(to_json(s)) == s);
    }
    CHECK(to_json(NormedSpace::infinity(2))["p"] == "inf");
}

TEST_CASE("maps round-trip through JSON") {
    const NormedSpace s(3, 2.0);
    const auto g = sample_lifted_generator(s, 5, 5);
    const auto back = parse_map(parse_json_text(to_json(g).dump()));
    for (const auto& z : sphere_sample(s, 10, 1)) CHECK((back(0.8 * z) - g(0.8 * z)).norm() == 0.0);
}

TEST_CASE("degree 0 and 1 terms fold into constant and linear parts") {
    const auto j = parse_json_text(R"({
        "space": {"dim": 2, "p": 2},
        "terms": [
          {"degree": 0, "monomial": [0, 0], "coeff": [[1, 0], [0, 0]]},
          {"degree": 1, "monomial": [0, 1], "coeff": [[0, 0], [2, 0]]},
          {"degree": 3, "monomial": [2, 1], "coeff": [[0, 1], [0, 0]]}
        ]})");
    const auto m = parse_map(j);
    CHECK(m.constant()[0] == Complex(1.0));
    CHECK(m.linear()(1, 1) == Complex(2.0));
    REQUIRE(m.part(3));
    CHECK(m.degree() == 3);
}

TEST_CASE("syntax errors report line and column") {
    try {
        parse_json_text("{\n  \"space\": {\"dim\": 2,,\n}", "bad.json");
        FAIL("expected an InputError");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        CHECK(msg.rfind("bad.json:2:", 0) == 0);
    }
}

TEST_CASE("field errors name the offending path") {
    auto expect = [](const std::string& text, const std::string& fragment) {
        try {
            parse_map(parse_json_text(text));
            FAIL("expected an InputError");
        } catch (const InputError& e) {
            CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
        }
    };
    expect(R"({"constant": []})", "missing field \"space\"");
    expect(R"({"space": {"dim": 2, "p": "two"}})", "space.p");
    expect(R"({"space": {"dim": 2, "p": 0.5}})", "space");
    expect(R"({"space": {"dim": 2, "p": 2}, "constant": [[1, 0]]})", "constant");
    expect(R"({"space": {"dim": 2, "p": 2}, "linear": [[[1, 0], [0, 0]], [[0, 0]]]})", "linear[1]");
    expect(R"({"space": {"dim": 2, "p": 2}, "terms": [{"degree": 2, "monomial": [1, 0], "coeff": [[1, 0], [0, 0]]}]})",
           "terms[0]");
    expect(R"({"space": {"dim": 2, "p": 2}, "terms": [{"degree": 2, "monomial": [1, 1], "coeff": [[1, "x"], [0, 0]]}]})",
           "terms[0].coeff[0][1]");
}

TEST_CASE("certificate JSON carries the declared fields") {
    PDCertificate c;
    c.verdict = Verdict::Certified;
    c.theta = 1.0;
    c.a = -0.5;
    c.b = 0.25;
    c.samples = 12;
    const auto j = to_json(c);
    for (const char* key : {"verdict", "theta", "a", "b", "epsilon", "witness", "samples"})
        CHECK(j.contains(key));
    CHECK(j["verdict"] == "certified");
}

TEST_CASE("bound curve CSV") {
    const NormedSpace s(2, 2.0);
    const auto g = PolyMap::linear_map(s, -Matrix::Identity(2, 2));
    const auto rep = verify_growth_bound(g, generator_certificate(g, certify_generator(g)));
    const auto csv = bound_curve_csv(rep);
    CHECK(csv.rfind("r,lhs_max,rhs_sharp,rhs_coarse\n", 0) == 0);
    check_half_row(csv);
}

TEST_CASE("shortest round-trip doubles") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.0) == "-2");
}

}
