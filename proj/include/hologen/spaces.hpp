#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace hologen {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr int kMaxDim = 16;

/// Which element of the (possibly non-unique) duality map to return on
/// non-smooth p-norms. Canonical breaks ties at the smallest index and
/// maps zero coordinates to zero; Alternate breaks ties at the largest
/// index and, for p = 1, puts full weight on zero coordinates.
enum class SupportSelection { Canonical, Alternate };

/// C^n with the p-norm, p in {1, inf} or [1.1, 10].
class NormedSpace {
public:
    NormedSpace(int dim, double p);

    static NormedSpace infinity(int dim);

    int dim() const { return dim_; }
    double p() const { return p_; }
    bool is_inf() const;
    bool is_hilbert() const { return p_ == 2.0; }
    /// Conjugate exponent q with 1/p + 1/q = 1.
    double dual_p() const;

    double norm(const Vector& z) const;
    double dual_norm(const Vector& w) const;

    bool operator==(const NormedSpace&) const = default;

private:
    int dim_;
    double p_;
};

/// u acting on v*: sum_j u_j * vstar_j (no conjugation).
Complex pairing(const Vector& u, const Vector& vstar);

struct SupportPair {
    Vector v;
    Vector vstar;
};

/// Explicit duality map: Re<v, v*> = |v|^2 = |v*|_dual^2.
SupportPair support_functional(const NormedSpace& space, const Vector& v,
                               SupportSelection selection = SupportSelection::Canonical);

/// Just the dual vector; skips the zero check and returns 0 for v = 0.
Vector dual_vector(const NormedSpace& space, const Vector& v,
                   SupportSelection selection = SupportSelection::Canonical);

/// Deterministic unit vectors. The first 2n entries are e_1, -e_1, e_2, ...
/// when count >= 2n; the rest are normalized complex Gaussians.
std::vector<Vector> sphere_sample(const NormedSpace& space, int count, std::uint64_t seed);

void check_dim(const NormedSpace& space, const Vector& z);

}  // namespace hologen
