#include "hologen/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "hologen/hull.hpp"
#include "hologen/sphere_search.hpp"

namespace hologen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ShellPoint {
    double r;
    Vector z;
};

std::vector<ShellPoint> shell_points(const NormedSpace& space, const std::vector<double>& shells,
                                     int per_shell, std::uint64_t seed) {
    const auto dirs = sphere_sample(space, per_shell, seed);
    std::vector<ShellPoint> pts;
    pts.reserve(shells.size() * dirs.size());
    for (double r : shells)
        for (const auto& d : dirs) pts.push_back({r, r * d});
    return pts;
}

std::vector<double> annulus_shells(double epsilon, int count) {
    const double inner = 1.0 - epsilon;
    const double outer = 0.999;
    std::vector<double> shells;
    for (int j = 1; j <= count; ++j) shells.push_back(inner + (outer - inner) * j / count);
    return shells;
}

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

// <F(z), z*> for each point; non-finite values are kept so callers can count them.
std::vector<Complex> boundary_values(const BallMap& f, const std::vector<ShellPoint>& pts) {
    std::vector<Complex> omega(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        omega[i] = pairing(f(pts[i].z), dual_vector(f.space(), pts[i].z));
    return omega;
}

// kappa(z) = <F(z), z*> - <F(0), z*>(1 - |z|^2); the shifted map e^{i theta}F - a id
// has generator slack |z|^2 a - Re(e^{i theta} kappa(z)).
Complex kappa(const BallMap& f, const Vector& z, double r) {
    const Vector zs = dual_vector(f.space(), z);
    return pairing(f(z), zs) - pairing(f.at_origin(), zs) * (1.0 - r * r);
}

double fitted_a(const std::vector<Complex>& scaled_kappa, double theta) {
    const Complex rot = std::polar(1.0, theta);
    double a = -std::numeric_limits<double>::infinity();
    for (const auto& k : scaled_kappa) a = std::max(a, (rot * k).real());
    return a;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "certified";
        case Verdict::Refuted: return "refuted";
        default: return "inconclusive";
    }
}

// ---------------------------------------------------------------- BallMap

BallMap::BallMap(NormedSpace space, std::function<Vector(const Vector&)> evaluator)
    : space_(space), eval_(std::move(evaluator)) {
    if (!eval_) throw std::invalid_argument("BallMap: empty evaluator");
    origin_ = eval_(Vector::Zero(space_.dim()));
    check_dim(space_, origin_);
}

BallMap BallMap::from_poly(PolyMap map) {
    auto shared = std::make_shared<const PolyMap>(std::move(map));
    BallMap out(shared->space(), [shared](const Vector& z) { return shared->evaluate(z); });
    out.poly_ = shared;
    return out;
}

BallMap BallMap::from_disc(DiscFunction f) {
    return BallMap(NormedSpace(1, 2.0), [f = std::move(f)](const Vector& z) {
        Vector out(1);
        out[0] = f(z[0]);
        return out;
    });
}

// ---------------------------------------------------------------- generators

double generator_slack(const BallMap& g, const Vector& z, SupportSelection selection) {
    const NormedSpace& space = g.space();
    const double r = space.norm(z);
    const Vector zs = dual_vector(space, z, selection);
    return pairing(g.at_origin(), zs).real() * (1.0 - r * r) - pairing(g(z), zs).real();
}

GeneratorVerdict certify_generator(const BallMap& g, const CertifyBudget& budget) {
    const NormedSpace& space = g.space();
    const auto pts = shell_points(space, budget.shells, budget.samples_per_shell, budget.seed);

    GeneratorVerdict out;
    out.tolerance = budget.tolerance;
    out.samples = static_cast<int>(pts.size());

    std::vector<double> slack(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double s = generator_slack(g, pts[i].z, budget.selection);
        slack[i] = std::isnan(s) ? -std::numeric_limits<double>::infinity() : s;
    }
    out.evaluations = static_cast<long>(pts.size());

    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t worst = std::min<std::size_t>(order.size(),
                                                    static_cast<std::size_t>(std::max(0, budget.refine_worst)));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(worst), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return slack[a] < slack[b] || (slack[a] == slack[b] && a < b);
                      });

    out.worst_slack = slack[order[0]];
    out.worst_point = pts[order[0]].z;

    bool exhausted = false;
    const auto objective = [&](const Vector& z) {
        const double s = generator_slack(g, z, budget.selection);
        return std::isnan(s) ? std::numeric_limits<double>::infinity() : -s;
    };
    for (std::size_t k = 0; k < worst; ++k) {
        if (out.worst_slack < -budget.tolerance) break;  // already refuted
        if (out.evaluations >= budget.max_evaluations) {
            exhausted = true;
            break;
        }
        const auto& p = pts[order[k]];
        Vector z = p.z;
        double value = -slack[order[k]];
        refine_on_sphere(space, objective, z, value, p.r, budget.refine_iters, &out.evaluations);
        if (-value < out.worst_slack) {
            out.worst_slack = -value;
            out.worst_point = z;
        }
    }

    if (out.worst_slack < -budget.tolerance) {
        out.verdict = Verdict::Refuted;
        out.witness = out.worst_point;
    } else {
        out.verdict = exhausted ? Verdict::Inconclusive : Verdict::Certified;
    }
    return out;
}

GeneratorVerdict certify_generator(const PolyMap& g, const CertifyBudget& budget) {
    return certify_generator(BallMap::from_poly(g), budget);
}

// ---------------------------------------------------------------- shifts

PolyMap shift_to_generator(const PolyMap& f, double theta, double a) {
    const Complex rot = std::polar(1.0, theta);
    const int n = f.space().dim();
    std::vector<HomPoly> higher;
    for (const auto& h : f.higher()) higher.push_back(h.scaled(rot));
    return PolyMap(f.space(), rot * f.constant(), rot * f.linear() - a * Matrix::Identity(n, n),
                   std::move(higher));
}

BallMap shift_to_generator(const BallMap& f, double theta, double a) {
    if (f.poly()) return BallMap::from_poly(shift_to_generator(*f.poly(), theta, a));
    const Complex rot = std::polar(1.0, theta);
    return BallMap(f.space(), [f, rot, a](const Vector& z) -> Vector { return rot * f(z) - a * z; });
}

PolyMap unshift_generator(const PolyMap& g, double theta, double a) {
    const Complex rot = std::polar(1.0, -theta);
    const int n = g.space().dim();
    std::vector<HomPoly> higher;
    for (const auto& h : g.higher()) higher.push_back(h.scaled(rot));
    return PolyMap(g.space(), rot * g.constant(),
                   rot * (g.linear() + a * Matrix::Identity(n, n)), std::move(higher));
}

// ---------------------------------------------------------------- pseudo-dissipativity

double pd_inequality_slack(const BallMap& f, double theta, double a, double b, double epsilon,
                           const PDBudget& budget) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0, 1)");
    const auto pts = shell_points(f.space(), annulus_shells(epsilon, budget.annulus_shells),
                                  budget.samples_per_shell, budget.ball.seed);
    const auto omega = boundary_values(f, pts);
    const Complex rot = std::polar(1.0, theta);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r2 = pts[i].r * pts[i].r;
        worst = std::min(worst, a * r2 + b * (1.0 - r2) - (rot * omega[i]).real());
    }
    return worst;
}

PDCertificate certify_pseudo_dissipative(const BallMap& f, double epsilon, const PDBudget& budget) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0, 1)");
    const NormedSpace& space = f.space();
    PDCertificate out;

    for (int attempt = 0; attempt <= budget.epsilon_retries; ++attempt) {
        const double eps = epsilon / std::pow(2.0, attempt);
        const auto ann = annulus_shells(eps, budget.annulus_shells);
        const auto pts = shell_points(space, ann, budget.samples_per_shell, budget.ball.seed);
        const auto omega = boundary_values(f, pts);

        std::vector<Complex> finite_omega;
        std::vector<double> moduli;
        for (const auto& w : omega)
            if (finite(w)) {
                finite_omega.push_back(w);
                moduli.push_back(std::abs(w));
            }
        out = PDCertificate{};
        out.epsilon = eps;
        out.samples = static_cast<int>(pts.size());
        out.hull_vertices = convex_hull(finite_omega);
        if (moduli.empty()) {
            out.verdict = Verdict::Inconclusive;
            out.note = "no finite boundary samples";
            return out;
        }
        const auto mid = moduli.begin() + static_cast<std::ptrdiff_t>(moduli.size() / 2);
        std::nth_element(moduli.begin(), mid, moduli.end());
        const double big = budget.big_radius_factor * (1.0 + *mid);

        bool covers = true;
        for (int k = 0; k < budget.angle_grid && covers; ++k) {
            const Complex u = std::polar(1.0, kTwoPi * k / budget.angle_grid);
            if (support_value(out.hull_vertices, u) < big) covers = false;
        }
        if (covers) {
            out.verdict = Verdict::Refuted;
            out.note = "sampled hull covers a disc of radius " + std::to_string(big);
            continue;  // retry on a thinner annulus
        }

        // Fit a on the whole ball: certify shells plus the annulus shells.
        auto fit_pts = shell_points(space, budget.ball.shells, budget.ball.samples_per_shell,
                                    budget.ball.seed);
        fit_pts.insert(fit_pts.end(), pts.begin(), pts.end());
        std::vector<Complex> scaled(fit_pts.size());
        bool all_finite = true;
        for (std::size_t i = 0; i < fit_pts.size(); ++i) {
            scaled[i] = kappa(f, fit_pts[i].z, fit_pts[i].r) / (fit_pts[i].r * fit_pts[i].r);
            all_finite = all_finite && finite(scaled[i]);
        }
        if (!all_finite) {
            out.verdict = Verdict::Inconclusive;
            out.note = "non-finite values inside the ball; no half-plane fit";
            return out;
        }

        double theta = 0.0;
        double a = fitted_a(scaled, 0.0);
        for (int k = 1; k < budget.angle_grid; ++k) {
            const double t = kTwoPi * k / budget.angle_grid;
            const double v = fitted_a(scaled, t);
            if (v < a) {
                a = v;
                theta = t;
            }
        }
        {
            const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
            double lo = theta - kTwoPi / budget.angle_grid;
            double hi = theta + kTwoPi / budget.angle_grid;
            for (int it = 0; it < 60; ++it) {
                const double x1 = hi - invphi * (hi - lo);
                const double x2 = lo + invphi * (hi - lo);
                if (fitted_a(scaled, x1) < fitted_a(scaled, x2))
                    hi = x2;
                else
                    lo = x1;
            }
            const double t = 0.5 * (lo + hi);
            const double v = fitted_a(scaled, t);
            if (v < a) {
                a = v;
                theta = t;
            }
        }
        theta = std::fmod(theta + kTwoPi, kTwoPi);

        // Local refinement of the supremum at the worst sampled points.
        {
            const Complex rot = std::polar(1.0, theta);
            std::vector<std::size_t> order(fit_pts.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            const std::size_t top = std::min<std::size_t>(order.size(),
                                                          static_cast<std::size_t>(budget.fit_refine_points));
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                              [&](std::size_t x, std::size_t y) {
                                  return (rot * scaled[x]).real() > (rot * scaled[y]).real();
                              });
            for (std::size_t k = 0; k < top; ++k) {
                const auto& p = fit_pts[order[k]];
                const double r = p.r;
                const auto objective = [&](const Vector& z) {
                    return (rot * kappa(f, z, r)).real() / (r * r);
                };
                Vector z = p.z;
                double value = (rot * scaled[order[k]]).real();
                refine_on_sphere(space, objective, z, value, r, budget.ball.refine_iters);
                a = std::max(a, value);
            }
        }

        // The shifted map must pass the generator test at the same budget;
        // a sampled sup can only undershoot, so raise a by any residual violation.
        Verdict verified = Verdict::Inconclusive;
        for (int round = 0; round < budget.verify_rounds; ++round) {
            const auto v = certify_generator(shift_to_generator(f, theta, a), budget.ball);
            verified = v.verdict;
            if (v.verdict != Verdict::Refuted) break;
            const double r = space.norm(v.worst_point);
            a += -v.worst_slack / (r * r) + 1e-12 * (1.0 + std::abs(a));
            verified = Verdict::Inconclusive;
        }

        const Complex rot = std::polar(1.0, theta);
        double b = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double r2 = pts[i].r * pts[i].r;
            b = std::max(b, ((rot * omega[i]).real() - a * r2) / (1.0 - r2));
        }
        double min_slack = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double r2 = pts[i].r * pts[i].r;
            min_slack = std::min(min_slack, a * r2 + b * (1.0 - r2) - (rot * omega[i]).real());
        }

        out.theta = theta;
        out.a = a;
        out.b = b;
        out.min_slack = min_slack;
        out.verdict = verified == Verdict::Certified ? Verdict::Certified : Verdict::Inconclusive;
        if (out.verdict == Verdict::Inconclusive)
            out.note = "shifted map did not verify as a generator within the budget";
        return out;
    }
    return out;
}

PDCertificate certify_pseudo_dissipative(const PolyMap& f, double epsilon, const PDBudget& budget) {
    return certify_pseudo_dissipative(BallMap::from_poly(f), epsilon, budget);
}

// ---------------------------------------------------------------- coefficient checks

OrtReport poly_ort_check(const PolyMap& g, const GeneratorVerdict& verdict, int v_samples,
                         std::uint64_t seed) {
    if (verdict.verdict != Verdict::Certified)
        throw std::invalid_argument("poly_ort_check: input is not a certified generator");
    const NormedSpace& space = g.space();
    OrtReport rep;
    rep.max_re_tv = -std::numeric_limits<double>::infinity();
    for (const auto& v : sphere_sample(space, v_samples, seed)) {
        const Vector vs = dual_vector(space, v);
        const double re_tv = pairing(g.linear() * v, vs).real();
        ++rep.samples;
        rep.max_re_tv = std::max(rep.max_re_tv, re_tv);
        bool bad = re_tv > 1e-9;
        if (std::abs(re_tv) <= 1e-9) {
            ++rep.degenerate_points;
            const Complex g0 = pairing(g.constant(), vs);
            double err = 0.0;
            for (const auto& h : g.higher()) {
                const Complex c = pairing(h(v), vs);
                err = std::max(err, std::abs(h.degree() == 2 ? c + std::conj(g0) : c));
            }
            // Q_2 may be absent, in which case <Q_2(v), v*> = 0 must equal -conj<G(0), v*>.
            if (!g.part(2)) err = std::max(err, std::abs(g0));
            rep.max_identity_error = std::max(rep.max_identity_error, err);
            bad = bad || err > 1e-8;
        }
        if (bad) ++rep.violations;
    }
    return rep;
}

OrtReport poly_ort_check(const PolyMap& g, int v_samples, const CertifyBudget& budget) {
    return poly_ort_check(g, certify_generator(g, budget), v_samples, budget.seed);
}

CaratheodoryReport caratheodory_check(const DiscFunction& q, int order, double radius) {
    static constexpr double radii[] = {0.2, 0.5, 0.8, 0.95};
    for (double r : radii)
        for (int k = 0; k < 16; ++k) {
            const double re = q(std::polar(r, kTwoPi * k / 16.0)).real();
            if (re < -1e-9)
                throw std::invalid_argument("caratheodory_check: input has Re q < 0 on the disc");
        }
    const auto c = taylor_coefficients(q, order, radius);
    CaratheodoryReport rep;
    rep.re_q0 = q(Complex(0.0)).real();
    rep.max_excess = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= order; ++j) {
        const double m = std::abs(c[static_cast<std::size_t>(j)]);
        rep.moduli.push_back(m);
        const double excess = m - 2.0 * rep.re_q0;
        rep.max_excess = std::max(rep.max_excess, excess);
        if (excess > 1e-8) ++rep.violations;
    }
    return rep;
}

RestrictionVerdict certify_by_restrictions(const PolyMap& g, int v_samples,
                                           const CertifyBudget& disc_budget, std::uint64_t seed) {
    RestrictionVerdict out;
    bool inconclusive = false;
    for (const auto& v : sphere_sample(g.space(), v_samples, seed)) {
        const auto disc = BallMap::from_disc(restrict_to_direction(g, v));
        const auto verdict = certify_generator(disc, disc_budget);
        ++out.directions;
        if (verdict.verdict == Verdict::Refuted) {
            ++out.refuted_directions;
            if (!out.witness_direction) out.witness_direction = v;
        } else if (verdict.verdict == Verdict::Inconclusive) {
            inconclusive = true;
        }
    }
    out.verdict = out.refuted_directions > 0 ? Verdict::Refuted
                  : inconclusive             ? Verdict::Inconclusive
                                             : Verdict::Certified;
    return out;
}

}  // namespace hologen
