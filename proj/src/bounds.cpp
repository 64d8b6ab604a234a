#include "hologen/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace hologen {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kE = std::numbers::e;

void check_radius(double r) {
    if (!(r >= 0.0) || r >= 1.0)
        throw std::domain_error("radius must lie in [0, 1), got " + std::to_string(r));
}

// Search estimates of an infimum sit above the true value; when the Hilbert
// oracle is available take whichever is smaller (and the larger for sups).
double lower_m(const NormedSpace& space, const Matrix& a, const SearchBudget& search) {
    const auto est = m_of(space, a, search);
    return est.oracle ? std::min(est.value, *est.oracle) : est.value;
}

double upper_V(const NormedSpace& space, const Matrix& a, const SearchBudget& search) {
    const auto est = V_of(space, a, search);
    return est.oracle ? std::max(est.value, *est.oracle) : est.value;
}

void record(StageCheck& stage, double slack, double tol) {
    if (stage.checks == 0 || slack < stage.min_slack) stage.min_slack = slack;
    ++stage.checks;
    if (slack < -tol) stage.passed = false;
}

}  // namespace

AlphaBeta alpha_beta() {
    const double alpha = 8.0 * (kE * kLn2 + kLn2 + 1.0 - kE) / (8.0 * kLn2 - kE - 1.0);
    const double beta = 8.0 * (kE * kLn2 + 2.0 - kE) / (8.0 * kLn2 - kE);
    return {alpha, beta};
}

double harris_slope_at_two() { return 4.0 * (1.0 - kLn2); }

double linearized_harris(int j) {
    const double slope = harris_slope_at_two();
    return slope * j + 4.0 - 2.0 * slope;
}

double rhs_sharp(const BoundInputs& in, double r) {
    check_radius(r);
    const double tail = 8.0 * r * r * (1.0 - r * kLn2) / ((1.0 - r) * (1.0 - r));
    return r * (std::abs(in.a) + kE * in.V_shift) + 4.0 * r * r * in.F0_norm + tail * (-in.mT);
}

double rhs_coarse(const BoundInputs& in, double r) {
    check_radius(r);
    const auto [alpha, beta] = alpha_beta();
    const double blow = r / ((1.0 - r) * (1.0 - r));
    return 4.0 * in.F0_norm * r * r + std::abs(in.a) * alpha * blow + in.VA * beta * blow;
}

std::vector<CurvePoint> BoundReport::curve() const {
    std::map<double, CurvePoint> by_r;
    for (const auto& row : rows) {
        auto [it, fresh] = by_r.try_emplace(row.r, CurvePoint{row.r, row.lhs, row.rhs_sharp,
                                                              row.rhs_coarse});
        if (!fresh) it->second.lhs_max = std::max(it->second.lhs_max, row.lhs);
    }
    std::vector<CurvePoint> out;
    for (const auto& [r, pt] : by_r) out.push_back(pt);
    return out;
}

BoundInputs measure_bound_inputs(const PolyMap& f, double theta, double a,
                                 const SearchBudget& search, double* m_rotated) {
    const auto& space = f.space();
    const Matrix& lin = f.linear();
    const Matrix rotated = std::polar(1.0, theta) * lin;
    const Matrix shifted = rotated - a * Matrix::Identity(space.dim(), space.dim());

    BoundInputs in;
    in.a = a;
    in.theta = theta;
    in.F0_norm = space.norm(f.constant());
    in.VA = upper_V(space, lin, search);
    in.mT = lower_m(space, shifted, search);
    in.V_shift = upper_V(space, shifted, search);
    if (m_rotated) *m_rotated = lower_m(space, rotated, search);
    return in;
}

BoundReport verify_growth_bound(const PolyMap& f, const PDCertificate& cert,
                                const BoundGrid& grid) {
    if (cert.verdict != Verdict::Certified)
        throw std::invalid_argument("growth bound needs a certified map, verdict is " +
                                    to_string(cert.verdict));
    const auto& space = f.space();

    BoundReport rep;
    rep.tolerance = grid.tolerance;
    rep.inputs = measure_bound_inputs(f, cert.theta, cert.a, grid.search, &rep.m_rotated);
    rep.shift_rule_gap = std::abs((cert.a - rep.m_rotated) - (-rep.inputs.mT));
    if (rep.shift_rule_gap > 1e-6 * (1.0 + std::abs(cert.a)))
        throw std::logic_error("shift rule mismatch: a - m(e^{i theta}A) and -m(T) differ by " +
                               std::to_string(rep.shift_rule_gap));

    const Vector f0 = f.constant();
    const auto dirs = sphere_sample(space, grid.samples_per_shell, grid.seed);
    rep.min_slack = rep.min_sharp_slack = rep.min_coarse_slack =
        std::numeric_limits<double>::infinity();
    for (double r : grid.shells) {
        if (r > 0.99) continue;
        const double sharp = rhs_sharp(rep.inputs, r);
        const double coarse = rhs_coarse(rep.inputs, r);
        for (const auto& d : dirs) {
            const Vector z = r * d;
            const double lhs = space.norm(f.evaluate(z) - f0);
            const double slack = std::min(sharp, coarse) - lhs;
            rep.rows.push_back({r, lhs, sharp, coarse, slack});
            rep.min_slack = std::min(rep.min_slack, std::isnan(slack) ? -INFINITY : slack);
            rep.min_sharp_slack = std::min(rep.min_sharp_slack, sharp - lhs);
            rep.min_coarse_slack = std::min(rep.min_coarse_slack, coarse - lhs);
        }
    }
    if (rep.rows.empty()) rep.min_slack = rep.min_sharp_slack = rep.min_coarse_slack = 0.0;
    rep.violated = rep.min_slack < -rep.tolerance;
    return rep;
}

PDCertificate generator_certificate(const PolyMap& g, const GeneratorVerdict& verdict) {
    if (verdict.verdict != Verdict::Certified)
        throw std::invalid_argument("map is not a certified generator (verdict " +
                                    to_string(verdict.verdict) + ")");
    PDCertificate cert;
    cert.verdict = Verdict::Certified;
    cert.theta = 0.0;
    cert.a = 0.0;
    cert.b = g.space().norm(g.constant());
    cert.epsilon = 0.0;
    cert.samples = verdict.samples;
    cert.note = "generator";
    return cert;
}

ChainReport verify_intermediate_chain(const PolyMap& g, const GeneratorVerdict& verdict,
                                      int v_samples, const BoundGrid& grid) {
    if (verdict.verdict != Verdict::Certified)
        throw std::invalid_argument("intermediate chain needs a certified generator, verdict is " +
                                    to_string(verdict.verdict));
    if (v_samples < 1) throw std::invalid_argument("v_samples must be positive");
    const auto& space = g.space();
    const double tol = grid.tolerance;
    const Matrix& t = g.linear();
    const double g0 = space.norm(g.constant());
    const int degree = std::max(g.degree(), 2);

    ChainReport rep;
    rep.mT = lower_m(space, t, grid.search);
    rep.VT = upper_V(space, t, grid.search);

    for (const auto& v : sphere_sample(space, v_samples, grid.seed ^ 0x5eed)) {
        const auto sp = support_functional(space, v);
        const double re_tv = pairing(t * v, sp.vstar).real();
        for (const auto& q : g.higher()) {
            const double lhs = std::abs(pairing(q(v), sp.vstar));
            const double rhs = (q.degree() == 2 ? g0 : 0.0) - 2.0 * re_tv;
            record(rep.coefficient_bounds, rhs - lhs, tol);
        }
    }

    const auto dirs = sphere_sample(space, grid.samples_per_shell, grid.seed);
    const Vector at0 = g.constant();
    for (double r : grid.shells) {
        if (r > 0.99) continue;
        for (const auto& d : dirs) {
            const Vector z = r * d;
            const double rz = space.norm(z);

            const double l0 = space.norm(g.evaluate(z) - at0);
            const double tz = space.norm(t * z);
            record(rep.harris_terms, kE * rz * rep.VT - tz, tol);
            double l1 = tz;
            for (const auto& q : g.higher()) {
                const int j = q.degree();
                const double qz = space.norm(q(z));
                double bound = -2.0 * harris_constant(j) * std::pow(rz, j) * rep.mT;
                if (j == 2) bound += 4.0 * rz * rz * g0;
                record(rep.harris_terms, bound - qz, tol);
                l1 += qz;
            }
            record(rep.triangle, l1 - l0, tol);

            double harris_sum = 0.0;
            double linear_sum = 0.0;
            for (int j = 2; j <= degree; ++j) {
                harris_sum += harris_constant(j) * std::pow(rz, j);
                linear_sum += linearized_harris(j) * std::pow(rz, j);
            }
            const double base = kE * rz * rep.VT + 4.0 * rz * rz * g0;
            const double l2 = base - 2.0 * rep.mT * harris_sum;
            const double l3 = base - 2.0 * rep.mT * linear_sum;
            const double l4 = base - 8.0 * rep.mT * rz * rz * (1.0 - rz * kLn2) /
                                         ((1.0 - rz) * (1.0 - rz));
            record(rep.partial_sum, l2 - l1, tol);
            record(rep.linearized, l3 - l2, tol);
            record(rep.closed_form, l4 - l3, tol);
        }
    }

    for (int j = 2; j <= kMaxPolyDegree; ++j) {
        const double gap = linearized_harris(j) - harris_constant(j);
        record(rep.concavity, gap, 1e-12);
        if (j == 2) rep.concavity_gap_at_two = std::abs(gap);
    }
    if (rep.concavity_gap_at_two > 1e-12) rep.concavity.passed = false;

    rep.passed = rep.coefficient_bounds.passed && rep.harris_terms.passed &&
                 rep.triangle.passed && rep.partial_sum.passed && rep.linearized.passed &&
                 rep.closed_form.passed && rep.concavity.passed;
    return rep;
}

}  // namespace hologen
