#pragma once

#include <vector>

#include "hologen/certify.hpp"
#include "hologen/numrange.hpp"

namespace hologen {

struct AlphaBeta {
    double alpha;
    double beta;
};

/// alpha = 8(e ln2 + ln2 + 1 - e)/(8 ln2 - e - 1), beta = 8(e ln2 + 2 - e)/(8 ln2 - e).
AlphaBeta alpha_beta();

/// k'(2) = 4(1 - ln 2) for k(x) = x^{x/(x-1)}.
double harris_slope_at_two();

/// Tangent line of the concave k(x) at x = 2: k'(2) j + 4 - 2 k'(2).
double linearized_harris(int j);

/// Operator data feeding the growth estimate. mT is m(e^{i theta}A - a id)
/// (or m(T) for generators), V_shift is V(e^{i theta}A - a id), VA is V(A).
struct BoundInputs {
    double a = 0.0;
    double theta = 0.0;
    double F0_norm = 0.0;
    double VA = 0.0;
    double mT = 0.0;
    double V_shift = 0.0;
};

/// r(|a| + e V_shift) + 4 r^2 |F(0)| + 8 r^2 (1 - r ln2)/(1 - r)^2 (-mT).
double rhs_sharp(const BoundInputs& in, double r);

/// 4 |F(0)| r^2 + |a| alpha r/(1 - r)^2 + V(A) beta r/(1 - r)^2.
double rhs_coarse(const BoundInputs& in, double r);

struct BoundGrid {
    std::vector<double> shells = default_shells();
    int samples_per_shell = 256;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    SearchBudget search;
};

struct BoundRow {
    double r;    // shell radius, |z| up to rounding
    double lhs;  // |F(z) - F(0)|
    double rhs_sharp;
    double rhs_coarse;
    double slack;  // min(rhs_sharp, rhs_coarse) - lhs
};

struct CurvePoint {
    double r;
    double lhs_max;
    double rhs_sharp;
    double rhs_coarse;
};

struct BoundReport {
    BoundInputs inputs;
    double m_rotated = 0.0;        // m(e^{i theta} A)
    double shift_rule_gap = 0.0;   // |(a - m(e^{i theta}A)) - (-mT)|
    std::vector<BoundRow> rows;
    double min_slack = 0.0;
    double min_sharp_slack = 0.0;
    double min_coarse_slack = 0.0;
    double tolerance = 1e-9;
    bool violated = false;

    /// Per-shell maxima for plotting.
    std::vector<CurvePoint> curve() const;
};

/// Measures BoundInputs from the linear part of F for the certificate (theta, a).
BoundInputs measure_bound_inputs(const PolyMap& f, double theta, double a,
                                 const SearchBudget& search = {}, double* m_rotated = nullptr);

/// Throws std::invalid_argument unless cert is certified.
BoundReport verify_growth_bound(const PolyMap& f, const PDCertificate& cert,
                                const BoundGrid& grid = {});

/// Certificate (theta = 0, a = 0, b = |G(0)|) under which the sharp bound
/// specializes to the generator estimate. Throws std::invalid_argument
/// unless verdict is certified.
PDCertificate generator_certificate(const PolyMap& g, const GeneratorVerdict& verdict);

struct StageCheck {
    double min_slack = 0.0;
    int checks = 0;
    bool passed = true;
};

struct ChainReport {
    StageCheck coefficient_bounds;  // |<Q_j(v), v*>| bounds from the Caratheodory step
    StageCheck harris_terms;        // termwise |T z|, |Q_j(z)| bounds
    StageCheck triangle;            // |G(z) - G(0)| <= |Tz| + sum |Q_j(z)|
    StageCheck partial_sum;         // sum of termwise bounds <= Harris partial sum
    StageCheck linearized;          // true k_j <= tangent-line k_j in the partial sum
    StageCheck closed_form;         // partial sum <= infinite closed form
    StageCheck concavity;           // k(j) <= k'(2) j + 4 - 2k'(2), j = 2..32
    double concavity_gap_at_two = 0.0;
    double mT = 0.0;
    double VT = 0.0;
    bool passed = true;
};

/// Throws std::invalid_argument unless verdict is certified.
ChainReport verify_intermediate_chain(const PolyMap& g, const GeneratorVerdict& verdict,
                                      int v_samples, const BoundGrid& grid = {});

}  // namespace hologen
