#include "hologen/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace hologen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double p_norm(const Vector& z, double p) {
    double scale = 0.0;
    for (const auto& x : z) scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || std::isinf(p)) return scale;
    if (p == 1.0) {
        double s = 0.0;
        for (const auto& x : z) s += std::abs(x);
        return s;
    }
    if (p == 2.0) return z.norm();
    double s = 0.0;
    for (const auto& x : z) s += std::pow(std::abs(x) / scale, p);
    return scale * std::pow(s, 1.0 / p);
}

}  // namespace

NormedSpace::NormedSpace(int dim, double p) : dim_(dim), p_(p) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("space dimension must be in [1, " + std::to_string(kMaxDim) +
                                    "], got " + std::to_string(dim));
    const bool ok = p == 1.0 || p == 2.0 || std::isinf(p) || (p >= 1.1 && p <= 10.0);
    if (!ok || std::isnan(p) || p < 0)
        throw std::invalid_argument("norm exponent must be 1, inf, or in [1.1, 10], got " +
                                    std::to_string(p));
}

NormedSpace NormedSpace::infinity(int dim) { return NormedSpace(dim, kInf); }

bool NormedSpace::is_inf() const { return std::isinf(p_); }

double NormedSpace::dual_p() const {
    if (p_ == 1.0) return kInf;
    if (is_inf()) return 1.0;
    return p_ / (p_ - 1.0);
}

double NormedSpace::norm(const Vector& z) const {
    check_dim(*this, z);
    return p_norm(z, p_);
}

double NormedSpace::dual_norm(const Vector& w) const {
    check_dim(*this, w);
    return p_norm(w, dual_p());
}

void check_dim(const NormedSpace& space, const Vector& z) {
    if (z.size() != space.dim())
        throw std::invalid_argument("dimension mismatch: vector has " + std::to_string(z.size()) +
                                    " entries, space has dim " + std::to_string(space.dim()));
}

Complex pairing(const Vector& u, const Vector& vstar) {
    if (u.size() != vstar.size()) throw std::invalid_argument("pairing: dimension mismatch");
    Complex s = 0.0;
    for (Eigen::Index j = 0; j < u.size(); ++j) s += u[j] * vstar[j];
    return s;
}

Vector dual_vector(const NormedSpace& space, const Vector& v, SupportSelection selection) {
    const double nv = space.norm(v);
    const auto n = v.size();
    Vector w = Vector::Zero(n);
    if (nv == 0.0) return w;
    const double p = space.p();

    if (space.is_hilbert()) return v.conjugate();

    if (space.is_inf()) {
        // Ties at the maximum modulus are resolved by index; exact comparison
        // keeps the choice reproducible.
        Eigen::Index k = -1;
        double best = -1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double a = std::abs(v[j]);
            const bool take = selection == SupportSelection::Canonical ? a > best : a >= best;
            if (take) {
                best = a;
                k = j;
            }
        }
        w[k] = nv * std::conj(v[k]) / best;
        return w;
    }

    if (p == 1.0) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double a = std::abs(v[j]);
            if (a > 0.0)
                w[j] = nv * std::conj(v[j]) / a;
            else if (selection == SupportSelection::Alternate)
                w[j] = nv;
        }
        return w;
    }

    // |v_j|^{p-2} conj(v_j) written as |v_j|^{p-1} * conj(v_j)/|v_j| to stay
    // finite near zero coordinates when p < 2.
    for (Eigen::Index j = 0; j < n; ++j) {
        const double a = std::abs(v[j]);
        if (a == 0.0) continue;
        const double mag = nv * std::pow(a / nv, p - 1.0);
        w[j] = mag * std::conj(v[j]) / a;
    }
    return w;
}

SupportPair support_functional(const NormedSpace& space, const Vector& v,
                               SupportSelection selection) {
    check_dim(space, v);
    if (space.norm(v) == 0.0) throw std::invalid_argument("support functional of the zero vector");
    return {v, dual_vector(space, v, selection)};
}

std::vector<Vector> sphere_sample(const NormedSpace& space, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sphere_sample: count must be >= 1");
    const int n = space.dim();
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count >= 2 * n) {
        for (int k = 0; k < n; ++k) {
            Vector e = Vector::Zero(n);
            e[k] = 1.0;
            out.push_back(e);
            out.push_back(-e);
        }
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (static_cast<int>(out.size()) < count) {
        Vector z(n);
        for (int k = 0; k < n; ++k) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            z[k] = Complex(re, im);
        }
        const double nz = space.norm(z);
        if (nz == 0.0) continue;
        z /= nz;
        out.push_back(std::move(z));
    }
    return out;
}

}  // namespace hologen
