#include "hologen/numrange.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace hologen {

namespace {

void check_square(const NormedSpace& space, const Matrix& a) {
    if (a.rows() != space.dim() || a.cols() != space.dim())
        throw std::invalid_argument("dimension mismatch: matrix is " + std::to_string(a.rows()) +
                                    "x" + std::to_string(a.cols()) + ", space has dim " +
                                    std::to_string(space.dim()));
}

RangeEstimate from_search(const SearchResult& s, double sign) {
    RangeEstimate e;
    e.value = sign * s.value;
    e.raw_value = sign * s.raw_value;
    e.maximizer = s.argmax;
    e.samples = s.samples;
    e.refinement_iters = s.refinement_iters;
    return e;
}

double hermitian_part_max_eigenvalue(const Matrix& a) {
    const Matrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace

double hermitian_part_min_eigenvalue(const Matrix& a) {
    const Matrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double hilbert_numerical_radius(const Matrix& a, int grid) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    auto support = [&](double phi) { return hermitian_part_max_eigenvalue(std::polar(1.0, phi) * a); };
    double best_phi = 0.0;
    double best = support(0.0);
    for (int k = 1; k < grid; ++k) {
        const double phi = two_pi * k / grid;
        const double v = support(phi);
        if (v > best) {
            best = v;
            best_phi = phi;
        }
    }
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_phi - two_pi / grid;
    double hi = best_phi + two_pi / grid;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = support(x1);
    double f2 = support(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = support(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = support(x1);
        }
    }
    return std::max({best, f1, f2});
}

RangeEstimate m_of(const NormedSpace& space, const Matrix& a, const SearchBudget& budget) {
    check_square(space, a);
    const auto objective = [&](const Vector& v) {
        return -pairing(a * v, dual_vector(space, v)).real();
    };
    RangeEstimate e = from_search(maximize_on_sphere(space, objective, budget), -1.0);
    if (space.is_hilbert()) e.oracle = hermitian_part_min_eigenvalue(a);
    return e;
}

RangeEstimate V_of(const NormedSpace& space, const Matrix& a, const SearchBudget& budget) {
    check_square(space, a);
    const auto objective = [&](const Vector& v) {
        return std::abs(pairing(a * v, dual_vector(space, v)));
    };
    RangeEstimate e = from_search(maximize_on_sphere(space, objective, budget), 1.0);
    if (space.is_hilbert()) e.oracle = hilbert_numerical_radius(a);
    return e;
}

RangeEstimate V_of_poly(const NormedSpace& space, const HomPoly& poly, const SearchBudget& budget) {
    if (poly.dim() != space.dim()) throw std::invalid_argument("V_of_poly: dimension mismatch");
    const auto objective = [&](const Vector& v) {
        return std::abs(pairing(poly(v), dual_vector(space, v)));
    };
    return from_search(maximize_on_sphere(space, objective, budget), 1.0);
}

RangeEstimate poly_sup_norm(const NormedSpace& space, const HomPoly& poly,
                            const SearchBudget& budget) {
    if (poly.dim() != space.dim()) throw std::invalid_argument("poly_sup_norm: dimension mismatch");
    const auto objective = [&](const Vector& v) { return space.norm(poly(v)); };
    return from_search(maximize_on_sphere(space, objective, budget), 1.0);
}

RangeEstimate operator_norm(const NormedSpace& space, const Matrix& a, const SearchBudget& budget) {
    check_square(space, a);
    const auto objective = [&](const Vector& v) { return space.norm(a * v); };
    return from_search(maximize_on_sphere(space, objective, budget), 1.0);
}

double harris_constant(int m) {
    if (m < 1) throw std::invalid_argument("harris_constant: m must be >= 1");
    if (m == 1) return std::numbers::e;
    const double md = static_cast<double>(m);
    return std::pow(md, md / (md - 1.0));
}

HarrisReport harris_check(const NormedSpace& space, const HomPoly& poly, const SearchBudget& budget) {
    HarrisReport r;
    r.degree = poly.degree();
    r.sup_norm = poly_sup_norm(space, poly, budget).value;
    r.numerical_radius = V_of_poly(space, poly, budget).value;
    r.constant = harris_constant(poly.degree());
    r.slack = r.constant * r.numerical_radius - r.sup_norm;
    r.violated = r.slack < -1e-6;
    return r;
}

}  // namespace hologen
