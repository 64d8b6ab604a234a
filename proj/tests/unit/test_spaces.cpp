#include <doctest.h>

#include <cmath>
#include <random>

#include "hologen/spaces.hpp"

using namespace hologen;
using namespace std::complex_literals;

namespace {

Vector vec(std::initializer_list<Complex> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v[i++] = x;
    return v;
}

std::vector<NormedSpace> all_spaces(int n) {
    return {NormedSpace(n, 1.0), NormedSpace(n, 2.0), NormedSpace::infinity(n),
            NormedSpace(n, 1.1), NormedSpace(n, 3.0), NormedSpace(n, 10.0)};
}

}  // namespace

TEST_SUITE("spaces") {

TEST_CASE("norms of small vectors") {
    CHECK(NormedSpace(2, 2.0).norm(vec({3.0, 4.0i})) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(NormedSpace::infinity(2).norm(vec({1.0, 0.5})) == 1.0);
    CHECK(NormedSpace(2, 1.0).norm(vec({0.5, 0.5i})) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("constructor rejects bad parameters") {
    CHECK_THROWS(NormedSpace(0, 2.0));
    CHECK_THROWS(NormedSpace(kMaxDim + 1, 2.0));
    CHECK_THROWS(NormedSpace(2, 0.5));
    CHECK_THROWS(NormedSpace(2, 1.05));
    CHECK_THROWS(NormedSpace(2, 12.0));
    CHECK_NOTHROW(NormedSpace(2, 1.1));
    CHECK_NOTHROW(NormedSpace(2, 10.0));
}

TEST_CASE("dimension mismatch throws") {
    CHECK_THROWS(NormedSpace(3, 2.0).norm(vec({1.0, 2.0})));
}

TEST_CASE("support functional examples") {
    auto sp = support_functional(NormedSpace(2, 2.0), vec({1.0, 0.0}));
    CHECK(sp.vstar[0] == Complex(1.0));
    CHECK(sp.vstar[1] == Complex(0.0));
    CHECK(pairing(sp.v, sp.vstar) == Complex(1.0));

    const NormedSpace l1(2, 1.0);
    sp = support_functional(l1, vec({0.5, 0.5i}));
    CHECK(std::abs(sp.vstar[0] - 1.0) < 1e-15);
    CHECK(std::abs(sp.vstar[1] + 1.0i) < 1e-15);
    CHECK(std::abs(pairing(sp.v, sp.vstar) - 1.0) < 1e-15);
    CHECK(l1.dual_norm(sp.vstar) == doctest::Approx(1.0).epsilon(1e-15));

    sp = support_functional(NormedSpace::infinity(2), vec({1.0, 0.5}));
    CHECK(sp.vstar[0] == Complex(1.0));
    CHECK(sp.vstar[1] == Complex(0.0));

    CHECK_THROWS(support_functional(NormedSpace(2, 2.0), Vector::Zero(2)));
}

TEST_CASE("p = inf tie-break picks smallest index, alternate picks largest") {
    const auto space = NormedSpace::infinity(3);
    const Vector v = vec({0.5i, -0.5, 0.2});
    const auto canon = support_functional(space, v);
    CHECK(canon.vstar[0] != Complex(0.0));
    CHECK(canon.vstar[1] == Complex(0.0));
    const auto alt = support_functional(space, v, SupportSelection::Alternate);
    CHECK(alt.vstar[0] == Complex(0.0));
    CHECK(alt.vstar[1] != Complex(0.0));
    CHECK(std::abs(pairing(v, alt.vstar) - 0.25) < 1e-15);
}

TEST_CASE("p = 2 dual vector is the conjugate") {
    const NormedSpace space(4, 2.0);
    for (const auto& v : sphere_sample(space, 50, 3)) {
        const auto sp = support_functional(space, 0.7 * v);
        CHECK((sp.vstar - (0.7 * v).conjugate()).norm() == 0.0);
    }
}

TEST_CASE("support pair invariants hold on sampled vectors") {
    for (int n : {1, 2, 5}) {
        for (const auto& space : all_spaces(n)) {
            std::mt19937_64 rng(11);
            std::uniform_real_distribution<double> scale(0.1, 3.0);
            for (const auto& u : sphere_sample(space, 100, 5)) {
                const Vector v = scale(rng) * u;
                const double nv = space.norm(v);
                for (auto sel : {SupportSelection::Canonical, SupportSelection::Alternate}) {
                    const auto sp = support_functional(space, v, sel);
                    CHECK(std::abs(pairing(v, sp.vstar).real() - nv * nv) <= 1e-12 * nv * nv);
                    CHECK(std::abs(space.dual_norm(sp.vstar) - nv) <= 1e-12 * nv);
                }
            }
        }
    }
}

TEST_CASE("unimodular rotation keeps the pairing equal to the squared norm") {
    for (const auto& space : all_spaces(3)) {
        for (const auto& v : sphere_sample(space, 30, 8)) {
            const Complex lambda = std::polar(1.0, 0.83);
            const Vector w = lambda * v;
            const auto sp = support_functional(space, w);
            CHECK(std::abs(pairing(w, sp.vstar) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("norm is absolutely homogeneous and definite") {
    for (const auto& space : all_spaces(3)) {
        CHECK(space.norm(Vector::Zero(3)) == 0.0);
        for (const auto& v : sphere_sample(space, 20, 2)) {
            const Complex lambda(-1.3, 0.4);
            CHECK(space.norm(lambda * v) == doctest::Approx(std::abs(lambda) * space.norm(v)).epsilon(1e-13));
        }
    }
}

TEST_CASE("sphere samples") {
    const NormedSpace line(1, 2.0);
    const auto two = sphere_sample(line, 2, 0);
    CHECK(two[0][0] == Complex(1.0));
    CHECK(two[1][0] == Complex(-1.0));

    for (const auto& space : all_spaces(4)) {
        const auto pts = sphere_sample(space, 200, 42);
        CHECK(pts.size() == 200);
        for (int k = 0; k < 4; ++k) {
            CHECK(pts[2 * k][k] == Complex(1.0));
            CHECK(pts[2 * k + 1][k] == Complex(-1.0));
        }
        for (const auto& v : pts) CHECK(std::abs(space.norm(v) - 1.0) <= 1e-14);
        const auto again = sphere_sample(space, 200, 42);
        bool same = true;
        for (std::size_t i = 0; i < pts.size(); ++i) same = same && pts[i] == again[i];
        CHECK(same);
    }
}

}
