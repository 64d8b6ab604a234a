#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hologen/polymaps.hpp"

namespace hologen {

enum class Verdict { Certified, Refuted, Inconclusive };

std::string to_string(Verdict v);

/// Holomorphic map on the unit ball given by an evaluator. Either wraps a
/// PolyMap or a scalar disc function (n = 1).
class BallMap {
public:
    BallMap(NormedSpace space, std::function<Vector(const Vector&)> evaluator);

    static BallMap from_poly(PolyMap map);
    static BallMap from_disc(DiscFunction f);

    const NormedSpace& space() const { return space_; }
    Vector operator()(const Vector& z) const { return eval_(z); }
    const Vector& at_origin() const { return origin_; }
    /// Non-null when the map is a polynomial.
    const PolyMap* poly() const { return poly_.get(); }

private:
    NormedSpace space_;
    std::function<Vector(const Vector&)> eval_;
    Vector origin_;
    std::shared_ptr<const PolyMap> poly_;
};

inline const std::vector<double>& default_shells() {
    static const std::vector<double> shells = {0.1, 0.2, 0.3, 0.4,  0.5, 0.6,
                                               0.7, 0.8, 0.9, 0.95, 0.99};
    return shells;
}

struct CertifyBudget {
    std::vector<double> shells = default_shells();
    int samples_per_shell = 256;
    int refine_worst = 32;
    int refine_iters = 200;
    long max_evaluations = 20'000'000;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    SupportSelection selection = SupportSelection::Canonical;
};

struct GeneratorVerdict {
    Verdict verdict = Verdict::Inconclusive;
    double tolerance = 1e-9;
    double worst_slack = 0.0;
    Vector worst_point;
    std::optional<Vector> witness;  // present iff refuted
    int samples = 0;
    long evaluations = 0;
};

/// Re<G(0), z*>(1 - |z|^2) - Re<G(z), z*>; nonnegative everywhere iff G is a generator.
double generator_slack(const BallMap& g, const Vector& z,
                       SupportSelection selection = SupportSelection::Canonical);

GeneratorVerdict certify_generator(const BallMap& g, const CertifyBudget& budget = {});
GeneratorVerdict certify_generator(const PolyMap& g, const CertifyBudget& budget = {});

struct PDBudget {
    int angle_grid = 720;
    int annulus_shells = 8;
    int samples_per_shell = 256;
    double big_radius_factor = 1e3;
    int epsilon_retries = 2;
    int fit_refine_points = 32;
    int verify_rounds = 4;
    CertifyBudget ball;
};

struct PDCertificate {
    Verdict verdict = Verdict::Inconclusive;
    double theta = 0.0;
    double a = 0.0;
    double b = 0.0;
    double epsilon = 0.1;
    std::vector<Complex> hull_vertices;
    double min_slack = 0.0;  // over annulus samples, certified only
    int samples = 0;
    std::string note;
};

/// Samples Omega_eps = {<F(z), z*> : 1 - eps < |z| < 1}, refutes when its
/// hull swallows a huge disc, otherwise fits a supporting half-plane.
PDCertificate certify_pseudo_dissipative(const BallMap& f, double epsilon = 0.1,
                                         const PDBudget& budget = {});
PDCertificate certify_pseudo_dissipative(const PolyMap& f, double epsilon = 0.1,
                                         const PDBudget& budget = {});

/// Minimum over annulus samples of a|z|^2 + b(1 - |z|^2) - Re(e^{i theta}<F(z), z*>).
double pd_inequality_slack(const BallMap& f, double theta, double a, double b, double epsilon,
                           const PDBudget& budget = {});

/// G = e^{i theta} F - a id.
PolyMap shift_to_generator(const PolyMap& f, double theta, double a);
BallMap shift_to_generator(const BallMap& f, double theta, double a);
/// Inverse of shift_to_generator: F = e^{-i theta}(G + a id).
PolyMap unshift_generator(const PolyMap& g, double theta, double a);

struct OrtReport {
    int samples = 0;
    int violations = 0;
    double max_re_tv = 0.0;          // max of Re<Tv, v*>
    int degenerate_points = 0;       // |Re<Tv, v*>| <= 1e-9
    double max_identity_error = 0.0;  // over degenerate points
};

/// Re<Tv, v*> <= 0 on sampled unit v; where it vanishes, checks
/// <Q_2(v), v*> = -conj<G(0), v*> and <Q_j(v), v*> = 0 for j >= 3.
/// Throws std::invalid_argument unless `verdict` is certified.
OrtReport poly_ort_check(const PolyMap& g, const GeneratorVerdict& verdict, int v_samples,
                         std::uint64_t seed = 0);
OrtReport poly_ort_check(const PolyMap& g, int v_samples, const CertifyBudget& budget = {});

struct CaratheodoryReport {
    double re_q0 = 0.0;
    std::vector<double> moduli;  // |a_1| .. |a_order|
    double max_excess = 0.0;     // max_j |a_j| - 2 Re q(0)
    int violations = 0;          // |a_j| > 2 Re q(0) + 1e-8
};

/// Throws std::invalid_argument when sampling finds Re q < -1e-9.
CaratheodoryReport caratheodory_check(const DiscFunction& q, int order, double radius = 0.7);

struct RestrictionVerdict {
    Verdict verdict = Verdict::Inconclusive;  // refuted iff some restriction is refuted
    int directions = 0;
    int refuted_directions = 0;
    std::optional<Vector> witness_direction;
};

/// Runs the disc certifier on zeta -> <G(zeta v), v*> for sampled unit v.
RestrictionVerdict certify_by_restrictions(const PolyMap& g, int v_samples,
                                           const CertifyBudget& disc_budget = {},
                                           std::uint64_t seed = 0);

}  // namespace hologen
