#pragma once

#include <optional>

#include "hologen/polymaps.hpp"
#include "hologen/sphere_search.hpp"

namespace hologen {

enum class RangeMethod { SphereSearch, HilbertOracle };

/// One-sided estimate of m(A), V(A) or V(P): search values are inner
/// approximations (never above a true sup, never below a true inf).
struct RangeEstimate {
    double value = 0.0;
    Vector maximizer;  // unit vector attaining `value`
    RangeMethod method = RangeMethod::SphereSearch;
    int samples = 0;
    int refinement_iters = 0;
    double raw_value = 0.0;        // best sampled value before refinement
    std::optional<double> oracle;  // exact Hilbert-space value when p = 2
};

/// inf over |v| = 1 of Re<Av, v*>.
RangeEstimate m_of(const NormedSpace& space, const Matrix& a, const SearchBudget& budget = {});

/// sup over |v| = 1 of |<Av, v*>|.
RangeEstimate V_of(const NormedSpace& space, const Matrix& a, const SearchBudget& budget = {});

/// sup over |v| = 1 of |<P(v), v*>|.
RangeEstimate V_of_poly(const NormedSpace& space, const HomPoly& poly,
                        const SearchBudget& budget = {});

/// sup over |v| = 1 of |P(v)|.
RangeEstimate poly_sup_norm(const NormedSpace& space, const HomPoly& poly,
                            const SearchBudget& budget = {});

/// Induced operator norm sup |Av| by sphere search.
RangeEstimate operator_norm(const NormedSpace& space, const Matrix& a,
                            const SearchBudget& budget = {});

/// lambda_min of the Hermitian part (A + A^H)/2.
double hermitian_part_min_eigenvalue(const Matrix& a);

/// Euclidean numerical radius: max over phi of lambda_max(Re(e^{i phi} A)),
/// scanned on `grid` angles and refined by golden section.
double hilbert_numerical_radius(const Matrix& a, int grid = 64);

/// k_1 = e, k_m = m^{m/(m-1)}.
double harris_constant(int m);

struct HarrisReport {
    int degree = 0;
    double sup_norm = 0.0;          // |P| lower estimate
    double numerical_radius = 0.0;  // V(P) lower estimate
    double constant = 0.0;          // k_m
    double slack = 0.0;             // k_m V(P) - |P|
    bool violated = false;          // slack < -1e-6
};

HarrisReport harris_check(const NormedSpace& space, const HomPoly& poly,
                          const SearchBudget& budget = {});

}  // namespace hologen
