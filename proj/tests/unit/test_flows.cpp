#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <random>

#include "hologen/flows.hpp"
#include "hologen/numrange.hpp"

using namespace hologen;

namespace {

PolyMap scaled_identity(const NormedSpace& s, Complex c) {
    return PolyMap::linear_map(s, c * Matrix::Identity(s.dim(), s.dim()));
}

PolyMap riccati() {
    const NormedSpace line(1, 2.0);
    HomPoly q(1, 2);
    q.add_term({2}, Vector::Constant(1, -1.0));
    return PolyMap(line, Vector::Constant(1, 1.0), Matrix::Zero(1, 1), {q});
}

Vector point(std::initializer_list<Complex> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v[i++] = x;
    return v;
}

}  // namespace

TEST_SUITE("flows") {

TEST_CASE("linear contraction matches the exponential") {
    const NormedSpace s(2, 2.0);
    const Vector z0 = point({0.3, Complex(0.2, -0.4)});
    const auto res = integrate(scaled_identity(s, -1.0), z0, 1.0);
    REQUIRE(res.ok());
    CHECK((res.endpoint() - std::exp(-1.0) * z0).norm() <= 1e-8);
    const auto& tr = res.trajectory;
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == 1.0);
    CHECK(tr.times.size() == tr.points.size());
    CHECK(tr.points.size() == tr.norms.size());
    for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
    for (std::size_t i = 0; i < tr.points.size(); ++i)
        CHECK(std::abs(tr.norms[i] - s.norm(tr.points[i])) <= 1e-12);
}

TEST_CASE("Riccati flow from the origin is tanh") {
    const auto res = integrate(riccati(), point({0.0}), 2.0);
    REQUIRE(res.ok());
    CHECK(std::abs(res.endpoint()[0] - 0.964027580075816884) <= 1e-8);
    for (std::size_t i = 0; i < res.trajectory.times.size(); ++i)
        CHECK(std::abs(res.trajectory.points[i][0] - std::tanh(res.trajectory.times[i])) <= 1e-8);
}

TEST_CASE("zero drift keeps the start point") {
    const NormedSpace s(3, 1.0);
    const Vector z0 = point({0.1, 0.2, 0.3});
    const auto res = integrate(PolyMap::zero(s), z0, 5.0);
    REQUIRE(res.ok());
    for (const auto& z : res.trajectory.points) CHECK(z == z0);
}

TEST_CASE("preconditions") {
    const NormedSpace s(2, 2.0);
    CHECK_THROWS(integrate(scaled_identity(s, -1.0), point({1.0, 0.0}), 1.0));
    CHECK_THROWS(integrate(scaled_identity(s, -1.0), point({0.1, 0.0}), -1.0));
}

TEST_CASE("halving rtol reduces the error on closed-form flows") {
    const NormedSpace s(1, 2.0);
    const Vector z0 = point({0.9});
    auto err = [&](const PolyMap& g, double rtol, double exact) {
        FlowOptions o;
        o.rtol = rtol;
        return std::abs(flow_to(g, z0, 2.0, o)[0] - exact);
    };
    const double lin_exact = 0.9 * std::exp(-2.0);
    const double ric_exact = std::tanh(2.0 + std::atanh(0.9));
    for (double rtol : {1e-4, 1e-5}) {
        const double e1 = err(scaled_identity(s, -1.0), rtol, lin_exact);
        const double e2 = err(scaled_identity(s, -1.0), rtol / 16, lin_exact);
        CHECK(e2 * 4 <= e1);
        const double r1 = err(riccati(), rtol, ric_exact);
        const double r2 = err(riccati(), rtol / 16, ric_exact);
        CHECK(r2 * 4 <= r1);
    }
}

TEST_CASE("dissipative linear flows have nonincreasing norm") {
    const NormedSpace s(3, 2.0);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (int k = 0; k < 10; ++k) {
        Matrix m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = {g(rng), g(rng)};
        const double top = -hermitian_part_min_eigenvalue(-m);  // largest eigenvalue of Hermitian part
        m -= top * Matrix::Identity(3, 3);
        const auto res = integrate(PolyMap::linear_map(s, m), 0.8 * sphere_sample(s, 8, k)[7], 3.0);
        REQUIRE(res.ok());
        const auto& n = res.trajectory.norms;
        for (std::size_t i = 1; i < n.size(); ++i) CHECK(n[i] <= n[i - 1] + 1e-12);
    }
}

TEST_CASE("explicit Euler has second-order local error") {
    const auto g = riccati();
    const Vector z0 = point({0.3});
    std::vector<double> errs;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        const Vector euler = z0 + dt * g(z0);
        const double exact = std::tanh(dt + std::atanh(0.3));
        errs.push_back(std::abs(euler[0] - exact));
    }
    CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("semigroup property") {
    const NormedSpace s(2, 2.0);
    const Vector z0 = point({0.4, 0.3});
    const auto lin = check_semigroup(scaled_identity(s, -1.0), z0, 1.0, 1.0, {}, 1e-10);
    CHECK(lin.passed);
    FlowOptions tight;
    tight.rtol = 1e-12;
    CHECK((flow_to(scaled_identity(s, -1.0), z0, 2.0, tight) - std::exp(-2.0) * z0).norm() <= 1e-10);

    const auto g = sample_lifted_generator(s, 3, 4);
    CHECK(check_semigroup(g, z0, 0.0, 0.0).difference == 0.0);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        const auto h = sample_lifted_generator(NormedSpace(2, 1.0), k, 3);
        const Vector start = 0.9 * u(rng) * sphere_sample(h.space(), 5, k)[4];
        CHECK(check_semigroup(h, start, 2 * u(rng), 2 * u(rng), {}, 1e-7).passed);
    }
}

TEST_CASE("invariance sweeps") {
    const NormedSpace s(2, 2.0);
    const auto rep = invariance_sweep(scaled_identity(s, -1.0), 100, 10.0, 1);
    CHECK(rep.passed());
    CHECK(rep.max_norm == rep.max_start_norm);
    CHECK(rep.max_start_norm <= 0.95);

    const auto ric = invariance_sweep(riccati(), 20, 10.0, 2);
    CHECK(ric.passed());
    CHECK(ric.max_norm < 1.0);
    CHECK(ric.max_norm > 0.999);

    const auto bad = invariance_sweep(scaled_identity(s, 1.0), 10, 10.0, 3);
    CHECK(bad.escapes == 10);
    REQUIRE(bad.witness_start);
    const double expected = std::log(1.0 / s.norm(*bad.witness_start));
    CHECK(bad.witness_time == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("sweeps are deterministic across worker counts") {
    const auto g = sample_lifted_generator(NormedSpace(3, 2.0), 6, 4);
    const auto a = invariance_sweep(g, 12, 3.0, 4, {}, 1);
    const auto b = invariance_sweep(g, 12, 3.0, 4, {}, 4);
    CHECK(a.max_norms == b.max_norms);
}

TEST_CASE("invariant ball probe") {
    const NormedSpace s(2, 2.0);
    ProbeBudget budget;
    budget.norm_search = {128, 20, 2, 0};
    const auto half = scaled_identity(s, 0.5);
    auto rep = invariant_ball_probe(half, std::numbers::pi, -0.5, {0.2, 0.5, 0.9}, budget);
    CHECK(rep.power_bounded);
    for (const auto& row : rep.rows) CHECK(row.invariant);
    REQUIRE(rep.smallest_invariant_radius);
    CHECK(*rep.smallest_invariant_radius == 0.2);

    HomPoly q(2, 2);
    Vector c = Vector::Zero(2);
    c[0] = 0.125;
    q.add_term({0, 2}, c);
    const PolyMap f(s, Vector::Zero(2), 0.5 * Matrix::Identity(2, 2), {q});
    rep = invariant_ball_probe(f, 0.0, 0.0, {0.1, 0.3}, budget);
    CHECK(rep.power_bounded);
    CHECK(rep.rows[0].invariant);
    CHECK(rep.rows[0].r_out <= 0.1 + 1e-12);

    rep = invariant_ball_probe(scaled_identity(s, 2.0), 0.0, 0.0, {0.1}, budget);
    CHECK_FALSE(rep.power_bounded);
    CHECK_FALSE(rep.rows[0].invariant);
    CHECK_FALSE(rep.smallest_invariant_radius);

    const PolyMap shifted(s, Vector::Constant(2, 0.1), Matrix::Zero(2, 2));
    CHECK_THROWS_AS(invariant_ball_probe(shifted, 0.0, 0.0, {0.1}), std::invalid_argument);
}

TEST_CASE("trajectory CSV layout") {
    const auto res = integrate(riccati(), point({0.0}), 0.5);
    const auto csv = trajectory_csv(res.trajectory);
    CHECK(csv.rfind("t,re_z1,im_z1,norm\n", 0) == 0);
    const auto lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == static_cast<long>(res.trajectory.times.size()) + 1);
}

}
