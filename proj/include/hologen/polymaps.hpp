#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hologen/spaces.hpp"

namespace hologen {

inline constexpr int kMaxPolyDegree = 32;

struct Monomial {
    std::vector<int> exponents;  // length dim, total degree = owning HomPoly degree
    Vector coeff;                // length dim
};

/// Homogeneous vector-valued polynomial of a fixed degree, stored as sparse
/// monomials sorted by exponent vector.
class HomPoly {
public:
    HomPoly(int dim, int degree);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    /// Adds coeff to the monomial with the given exponents (merging duplicates).
    void add_term(const std::vector<int>& exponents, const Vector& coeff);

    Vector operator()(const Vector& z) const;

    HomPoly scaled(Complex c) const;
    HomPoly left_multiplied(const Matrix& m) const;

private:
    int dim_;
    int degree_;
    std::vector<Monomial> terms_;
};

/// h(z) = h(0) + T z + sum_{j>=2} Q_j(z).
class PolyMap {
public:
    PolyMap(NormedSpace space, Vector constant, Matrix linear, std::vector<HomPoly> higher = {});

    static PolyMap zero(const NormedSpace& space);
    static PolyMap linear_map(const NormedSpace& space, const Matrix& m);

    const NormedSpace& space() const { return space_; }
    const Vector& constant() const { return constant_; }
    const Matrix& linear() const { return linear_; }
    const std::vector<HomPoly>& higher() const { return higher_; }
    /// Homogeneous part of degree j >= 2, or nullptr when absent.
    const HomPoly* part(int j) const;
    int degree() const;

    /// Throws std::domain_error unless |z| < 1.
    Vector evaluate(const Vector& z) const;
    Vector operator()(const Vector& z) const { return evaluate(z); }
    /// Polynomials are entire; iteration probes may leave the ball.
    Vector evaluate_entire(const Vector& z) const;

private:
    NormedSpace space_;
    Vector constant_;
    Matrix linear_;
    std::vector<HomPoly> higher_;
};

struct HerglotzAtom {
    double weight;  // >= 0
    double angle;   // radians
};

/// q(zeta) = i*beta + sum_m w_m (1 + e^{-i phi_m} zeta) / (1 - e^{-i phi_m} zeta).
struct HerglotzData {
    double beta = 0.0;
    std::vector<HerglotzAtom> atoms;

    Complex operator()(Complex zeta) const;
    /// Exact Taylor coefficients c_0..c_order.
    std::vector<Complex> taylor(int order) const;
};

/// Scalar holomorphic function on the unit disc.
class DiscFunction {
public:
    enum class Kind { Polynomial, Herglotz, GeneratorComposite, BlackBox };

    static DiscFunction polynomial(std::vector<Complex> coefficients);
    static DiscFunction herglotz(HerglotzData data);
    static DiscFunction black_box(std::function<Complex(Complex)> f);

    Kind kind() const;
    Complex operator()(Complex zeta) const;

    /// Only for Kind::Polynomial.
    const std::vector<Complex>& coefficients() const;
    /// Only for Kind::Herglotz.
    const HerglotzData& herglotz_data() const;

private:
    friend DiscFunction disc_generator_from(Complex g0, const DiscFunction& q);

    struct Composite {
        Complex g0;
        std::shared_ptr<const DiscFunction> q;
    };
    using Data = std::variant<std::vector<Complex>, HerglotzData, Composite,
                              std::function<Complex(Complex)>>;
    explicit DiscFunction(Data data) : data_(std::move(data)) {}
    Data data_;
};

/// Cauchy-integral trapezoid rule on |zeta| = radius with 4*(order+1) nodes.
std::vector<Complex> taylor_coefficients(const DiscFunction& f, int order, double radius = 0.7);

/// Deterministic Herglotz function with `atoms` boundary kernels.
DiscFunction herglotz_sample(std::uint64_t seed, int atoms);

/// g(zeta) = g0 - conj(g0) zeta^2 - zeta q(zeta). Throws if q is sampled with Re q < -1e-9.
DiscFunction disc_generator_from(Complex g0, const DiscFunction& q);

/// Polynomial disc generator of the given degree (>= 2) built from the Fejer
/// mean of q, which keeps Re q >= 0 after truncation.
DiscFunction fejer_generator(Complex g0, const DiscFunction& q, int degree);

/// Coordinatewise lift G(z)_k = g_k(z_k). degree < 0 infers it from
/// polynomial inputs; non-polynomial inputs are truncated Taylor series.
PolyMap lift_to_ball(const NormedSpace& space, std::span<const DiscFunction> disc_gens,
                     int degree = -1);

/// U h(U^H z) for a unitary U. Only defined on Hilbert (p = 2) balls.
PolyMap conjugate_by_unitary(const PolyMap& map, const Matrix& unitary);

Matrix random_unitary(int n, std::uint64_t seed);

/// Scalar polynomial zeta -> <h(zeta v), v*> for a unit vector v.
DiscFunction restrict_to_direction(const PolyMap& map, const Vector& v,
                                   SupportSelection selection = SupportSelection::Canonical);

struct GeneratorSampleOptions {
    int max_atoms = 3;
    double g0_scale = 0.8;
    bool unitary_mix = true;  // p = 2 only
};

/// Seeded infinitesimal generator on the ball of `space`, built from
/// Herglotz data. G(0) != 0 is drawn only where the coordinatewise lift
/// stays a generator: n = 1, p = inf, or p = 2 with matching damping.
PolyMap sample_lifted_generator(const NormedSpace& space, std::uint64_t seed, int degree,
                                const GeneratorSampleOptions& options = {});

}  // namespace hologen
