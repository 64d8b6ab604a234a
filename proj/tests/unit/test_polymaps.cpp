#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hologen/certify.hpp"
#include "hologen/polymaps.hpp"

using namespace hologen;
using namespace std::complex_literals;

namespace {

Vector vec(std::initializer_list<Complex> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v[i++] = x;
    return v;
}

// h(z) = (z_2^2, 0)
PolyMap z2_squared(const NormedSpace& space) {
    HomPoly q(2, 2);
    q.add_term({0, 2}, vec({1.0, 0.0}));
    return PolyMap(space, Vector::Zero(2), Matrix::Zero(2, 2), {q});
}

HomPoly random_hompoly(int n, int degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> pick(0, n - 1);
    HomPoly p(n, degree);
    for (int t = 0; t < 6; ++t) {
        std::vector<int> e(n, 0);
        for (int d = 0; d < degree; ++d) ++e[pick(rng)];
        Vector c(n);
        for (auto& x : c) x = {g(rng), g(rng)};
        p.add_term(e, c);
    }
    return p;
}

}  // namespace

TEST_SUITE("polymaps") {

TEST_CASE("evaluate examples") {
    const NormedSpace space(2, 2.0);
    const auto id = PolyMap::linear_map(space, Matrix::Identity(2, 2));
    const Vector z = vec({0.3, 0.4i});
    CHECK((id(z) - z).norm() == 0.0);

    const PolyMap c(space, vec({1.0, 0.0}), Matrix::Zero(2, 2));
    CHECK((c(z) - vec({1.0, 0.0})).norm() == 0.0);

    const auto h = z2_squared(space);
    CHECK((h(vec({0.0, 0.5})) - vec({0.25, 0.0})).norm() < 1e-16);
}

TEST_CASE("evaluation outside the open ball is rejected") {
    const auto id = PolyMap::linear_map(NormedSpace(2, 2.0), Matrix::Identity(2, 2));
    CHECK_THROWS_AS(id(vec({1.0, 0.0})), std::domain_error);
    CHECK_NOTHROW(id.evaluate_entire(vec({2.0, 0.0})));
}

TEST_CASE("evaluation at the origin returns the constant exactly") {
    const NormedSpace space(3, 2.0);
    const auto g = sample_lifted_generator(space, 4, 6);
    CHECK(g(Vector::Zero(3)) == g.constant());
}

TEST_CASE("higher parts must have distinct degrees >= 2") {
    const NormedSpace space(2, 2.0);
    CHECK_THROWS(PolyMap(space, Vector::Zero(2), Matrix::Zero(2, 2), {HomPoly(2, 2), HomPoly(2, 2)}));
    CHECK_THROWS(PolyMap(space, Vector::Zero(2), Matrix::Zero(2, 2), {HomPoly(2, 1)}));
    HomPoly q(2, 3);
    CHECK_THROWS(q.add_term({1, 1}, vec({1.0, 0.0})));
}

TEST_CASE("homogeneous parts are homogeneous") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (int degree = 2; degree <= 6; ++degree) {
        const auto p = random_hompoly(3, degree, degree);
        for (int k = 0; k < 20; ++k) {
            const Complex lambda(g(rng), g(rng));
            Vector z(3);
            for (auto& x : z) x = {g(rng), g(rng)};
            const Vector lhs = p(lambda * z);
            const Vector rhs = std::pow(lambda, degree) * p(z);
            CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
        }
    }
}

TEST_CASE("restriction examples") {
    const NormedSpace space(2, 2.0);
    const auto minus = PolyMap::linear_map(space, -Matrix::Identity(2, 2));
    for (const auto& v : sphere_sample(space, 10, 1)) {
        const auto g = restrict_to_direction(minus, v);
        const auto& c = g.coefficients();
        REQUIRE(c.size() >= 2);
        CHECK(std::abs(c[0]) < 1e-15);
        CHECK(std::abs(c[1] + 1.0) < 1e-14);
    }

    const NormedSpace line(1, 2.0);
    HomPoly q(1, 2);
    q.add_term({2}, vec({-1.0}));
    const PolyMap riccati(line, vec({1.0}), Matrix::Zero(1, 1), {q});
    const auto g = restrict_to_direction(riccati, vec({1.0}));
    const auto& c = g.coefficients();
    REQUIRE(c.size() == 3);
    CHECK(c[0] == Complex(1.0));
    CHECK(c[1] == Complex(0.0));
    CHECK(c[2] == Complex(-1.0));

    const double s = 1.0 / std::sqrt(2.0);
    const auto r = restrict_to_direction(z2_squared(space), vec({s, s}));
    CHECK(std::abs(r.coefficients()[2] - 1.0 / (2.0 * std::sqrt(2.0))) < 1e-15);

    CHECK_THROWS(restrict_to_direction(minus, vec({0.5, 0.0})));
}

TEST_CASE("restriction matches Taylor coefficients along rays") {
    for (const auto& space : {NormedSpace(3, 2.0), NormedSpace(3, 1.0), NormedSpace::infinity(3),
                              NormedSpace(3, 4.0)}) {
        const auto g = sample_lifted_generator(space, 9, 5);
        for (const auto& v : sphere_sample(space, 12, 4)) {
            const auto sp = support_functional(space, v);
            const auto direct = restrict_to_direction(g, v).coefficients();
            const auto ray = DiscFunction::black_box(
                [&](Complex zeta) { return pairing(g(zeta * v), sp.vstar); });
            const auto tc = taylor_coefficients(ray, 8);
            for (std::size_t k = 0; k < tc.size(); ++k) {
                const Complex expected = k < direct.size() ? direct[k] : 0.0;
                CHECK(std::abs(tc[k] - expected) <= 1e-10);
            }
        }
    }
}

TEST_CASE("taylor coefficients") {
    auto sq = taylor_coefficients(DiscFunction::polynomial({0.0, 0.0, 1.0}), 3, 0.5);
    const std::vector<Complex> want = {0.0, 0.0, 1.0, 0.0};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(sq[k] - want[k]) <= 1e-12);

    const auto geo = taylor_coefficients(
        DiscFunction::black_box([](Complex z) { return 1.0 / (1.0 - z); }), 4, 0.5);
    // 20 nodes alias c_{k+20m} r^{20m} onto c_k: every coefficient reads 1/(1 - r^20).
    const double aliased = 1.0 / (1.0 - std::pow(0.5, 20));
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(geo[k] - aliased) <= 1e-14);

    std::mt19937_64 rng(77);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Complex> coeffs(6);
        for (auto& c : coeffs) c = {g(rng), g(rng)};
        const auto out = taylor_coefficients(DiscFunction::polynomial(coeffs), 5);
        for (int k = 0; k <= 5; ++k) CHECK(std::abs(out[k] - coeffs[k]) <= 1e-10);
    }

    CHECK_THROWS(taylor_coefficients(DiscFunction::polynomial({1.0}), 0));
    CHECK_THROWS(taylor_coefficients(DiscFunction::polynomial({1.0}), 513));
    CHECK_THROWS(taylor_coefficients(
        DiscFunction::black_box([](Complex) -> Complex { throw std::runtime_error("boom"); }), 4));
}

TEST_CASE("herglotz samples") {
    HerglotzData kernel{0.0, {{1.0, 0.0}}};
    const auto q = DiscFunction::herglotz(kernel);
    CHECK(std::abs(q(0.0) - 1.0) < 1e-15);
    CHECK(std::abs(q(0.5) - 3.0) < 1e-14);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto h = herglotz_sample(seed, 1 + seed % 4);
        double wsum = 0.0;
        for (const auto& a : h.herglotz_data().atoms) {
            CHECK(a.weight >= 0.0);
            wsum += a.weight;
        }
        CHECK(std::abs(h(0.0).real() - wsum) < 1e-14);
        for (int k = 0; k < 100; ++k) {
            const Complex zeta = std::polar(std::sqrt(u(rng)) * 0.999, 2 * std::numbers::pi * u(rng));
            CHECK(h(zeta).real() >= -1e-12);
        }
    }
}

TEST_CASE("exact Herglotz Taylor coefficients match quadrature") {
    const auto q = herglotz_sample(3, 3);
    const int nodes = 44;
    const double r = 0.7;
    const auto exact = q.herglotz_data().taylor(10 + 8 * nodes);
    const auto quad = taylor_coefficients(q, 10, r);
    for (int k = 0; k <= 10; ++k) {
        Complex aliased = 0.0;
        for (int m = 0; m <= 8; ++m) aliased += exact[k + m * nodes] * std::pow(r, m * nodes);
        CHECK(std::abs(aliased - quad[k]) < 1e-12);
    }
}

TEST_CASE("disc generators from Herglotz data") {
    auto g = disc_generator_from(1.0, DiscFunction::polynomial({0.0}));
    for (Complex z : {Complex(0.3, 0.1), Complex(-0.7, 0.2)})
        CHECK(std::abs(g(z) - (1.0 - z * z)) < 1e-15);

    g = disc_generator_from(0.0, DiscFunction::polynomial({1.0}));
    CHECK(std::abs(g(0.4i) + 0.4i) < 1e-15);

    const auto q = DiscFunction::herglotz({0.0, {{1.0, 0.0}}});
    g = disc_generator_from(1.0i, q);
    CHECK(std::abs(g(0.0) - 1.0i) < 1e-15);
    const double h = 1e-6;
    const Complex deriv = (g(h) - g(-h)) / (2 * h);
    CHECK(std::abs(deriv + 1.0) < 1e-8);

    CHECK_THROWS(disc_generator_from(0.0, DiscFunction::polynomial({-1.0})));
}

TEST_CASE("disc generators satisfy the boundary inequality") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Complex g0(u(rng) - 0.5, u(rng) - 0.5);
        const auto g = disc_generator_from(g0, herglotz_sample(seed, 2));
        for (int k = 0; k < 500; ++k) {
            const Complex z = std::polar(std::sqrt(u(rng)) * 0.99, 2 * std::numbers::pi * u(rng));
            const double r2 = std::norm(z);
            const double slack = (g0 * std::conj(z)).real() * (1.0 - r2) - (g(z) * std::conj(z)).real();
            CHECK(slack >= -1e-12);
        }
    }
}

TEST_CASE("lifts") {
    const NormedSpace plane(2, 2.0);
    const auto minus = DiscFunction::polynomial({0.0, -1.0});
    const std::vector<DiscFunction> two = {minus, minus};
    const auto g = lift_to_ball(plane, two);
    CHECK((g.linear() + Matrix::Identity(2, 2)).norm() == 0.0);
    CHECK(g.constant().norm() == 0.0);

    const NormedSpace line(1, 2.0);
    const auto riccati = DiscFunction::polynomial({1.0, 0.0, -1.0});
    const std::vector<DiscFunction> one = {riccati};
    const auto l = lift_to_ball(line, one);
    CHECK(std::abs(l(vec({0.3}))[0] - riccati(0.3)) < 1e-15);

    const std::vector<DiscFunction> mixed = {riccati, minus};
    const auto m = lift_to_ball(plane, mixed);
    CHECK(certify_generator(m).verdict == Verdict::Certified);

    const std::vector<DiscFunction> deep = {DiscFunction::polynomial(std::vector<Complex>(40, 0.0))};
    CHECK_THROWS(lift_to_ball(line, deep));
}

TEST_CASE("unitary conjugation preserves evaluation structure") {
    const NormedSpace space(3, 2.0);
    const auto g = sample_lifted_generator(space, 2, 4, {3, 0.8, false});
    const Matrix u = random_unitary(3, 9);
    CHECK((u.adjoint() * u - Matrix::Identity(3, 3)).norm() < 1e-13);
    const auto c = conjugate_by_unitary(g, u);
    for (const auto& z : sphere_sample(space, 10, 1)) {
        const Vector w = 0.6 * z;
        CHECK((c(w) - u * g(u.adjoint() * w)).norm() < 1e-12);
    }
    CHECK_THROWS(conjugate_by_unitary(PolyMap::zero(NormedSpace(3, 1.0)), u));
}

TEST_CASE("sampled lifted generators are deterministic") {
    const NormedSpace space(4, 1.0);
    const auto a = sample_lifted_generator(space, 21, 5);
    const auto b = sample_lifted_generator(space, 21, 5);
    const Vector z = 0.5 * sphere_sample(space, 7, 0)[6];
    CHECK(a(z) == b(z));
    CHECK(a.degree() <= 5);
}

}
