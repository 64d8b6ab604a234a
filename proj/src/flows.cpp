#include "hologen/flows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "hologen/numrange.hpp"
#include "hologen/parallel.hpp"

namespace hologen {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants (Hairer, Norsett, Wanner).
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - 0.75 * kBeta;
constexpr double kSafe = 0.9;
constexpr double kMinShrink = 0.2;
constexpr double kMaxGrow = 10.0;

bool finite(const Vector& z) { return z.allFinite(); }

void push(Trajectory& tr, const NormedSpace& space, double t, const Vector& z) {
    tr.times.push_back(t);
    tr.points.push_back(z);
    tr.norms.push_back(space.norm(z));
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string to_string(FlowStatus s) {
    switch (s) {
        case FlowStatus::Completed: return "completed";
        case FlowStatus::Escaped: return "escaped";
        case FlowStatus::StepUnderflow: return "step-underflow";
    }
    return "unknown";
}

FlowResult integrate(const PolyMap& g, const Vector& z0, double t_end,
                     const FlowOptions& options) {
    const auto& space = g.space();
    check_dim(space, z0);
    if (!(space.norm(z0) < 1.0)) throw std::invalid_argument("start point must lie in the open unit ball");
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
    if (!(options.rtol > 0.0)) throw std::invalid_argument("rtol must be positive");

    auto rhs = [&](const Vector& z) { return g.evaluate_entire(z); };

    FlowResult res;
    Trajectory& tr = res.trajectory;
    push(tr, space, 0.0, z0);
    tr.step_stats.min_dt = std::numeric_limits<double>::infinity();
    if (t_end == 0.0) {
        tr.step_stats.min_dt = 0.0;
        return res;
    }

    double t = 0.0;
    Vector y = z0;
    double ny = space.norm(y);
    Vector k1 = rhs(y);
    double h = std::min(options.initial_step, t_end);
    double err_old = 1e-4;
    long steps = 0;

    while (t < t_end) {
        if (++steps > options.max_steps) {
            res.status = FlowStatus::StepUnderflow;
            res.stop_time = t;
            res.message = "step budget exhausted at t = " + fmt(t);
            return res;
        }
        const double remaining = t_end - t;
        const bool last = h >= remaining;
        const double step = last ? remaining : h;

        const Vector k2 = rhs(y + step * (a21 * k1));
        const Vector k3 = rhs(y + step * (a31 * k1 + a32 * k2));
        const Vector k4 = rhs(y + step * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vector k5 = rhs(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vector k6 = rhs(y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vector ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = rhs(ynew);
        const Vector err_vec =
            step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double nnew = space.norm(ynew);
        const double err_abs = space.norm(err_vec);
        const double tol = options.rtol * (1.0 + std::max(ny, nnew));
        const double err = std::isfinite(err_abs) ? std::max(err_abs / tol, 1e-10)
                                                  : std::numeric_limits<double>::infinity();

        bool accept = false;
        double shrink = 0.5;
        if (!finite(ynew) || !std::isfinite(err)) {
            shrink = 0.25;
        } else if (err > 1.0) {
            shrink = std::max(kMinShrink, kSafe * std::pow(err, -kExpo));
        } else if (nnew >= 1.0) {
            if (err_abs <= 0.5 * (nnew - 1.0)) {
                // The sphere is crossed by more than the step error: a real escape.
                const double frac = (1.0 - ny) / std::max(nnew - ny, 1e-300);
                res.status = FlowStatus::Escaped;
                res.stop_time = t + std::clamp(frac, 0.0, 1.0) * step;
                res.witness = ynew;
                res.message = "trajectory left the unit ball near t = " + fmt(res.stop_time);
                return res;
            }
            shrink = 0.5;
        } else if (err_abs > 0.5 * (1.0 - nnew)) {
            // Too close to the sphere for this step's error.
            shrink = std::clamp(kSafe * std::pow(0.5 * (1.0 - nnew) / err_abs, 0.2), kMinShrink, 0.9);
        } else {
            accept = true;
        }

        if (accept) {
            t = last ? t_end : t + step;
            y = ynew;
            ny = nnew;
            k1 = k7;
            push(tr, space, t, y);
            auto& st = tr.step_stats;
            ++st.accepted;
            st.min_dt = std::min(st.min_dt, step);
            st.max_dt = std::max(st.max_dt, step);
            double fac = kSafe * std::pow(err, -kExpo) * std::pow(err_old, kBeta);
            fac = std::clamp(fac, kMinShrink, kMaxGrow);
            err_old = std::max(err, 1e-4);
            h = step * fac;
        } else {
            ++tr.step_stats.rejected;
            h = step * shrink;
            if (h < options.min_step) {
                res.status = FlowStatus::StepUnderflow;
                res.stop_time = t;
                res.message = "step size fell below " + fmt(options.min_step) + " at t = " + fmt(t);
                return res;
            }
        }
    }
    if (tr.step_stats.accepted == 0) tr.step_stats.min_dt = 0.0;
    res.stop_time = t_end;
    return res;
}

Vector flow_to(const PolyMap& g, const Vector& z0, double t, const FlowOptions& options) {
    auto res = integrate(g, z0, t, options);
    if (!res.ok()) throw std::runtime_error("flow failed: " + res.message);
    return res.endpoint();
}

SemigroupReport check_semigroup(const PolyMap& g, const Vector& z0, double t, double s,
                                const FlowOptions& options, double tolerance) {
    SemigroupReport rep;
    rep.tolerance = tolerance > 0.0 ? tolerance : 10.0 * options.rtol;
    const Vector direct = flow_to(g, z0, t + s, options);
    const Vector composed = flow_to(g, flow_to(g, z0, t, options), s, options);
    rep.difference = g.space().norm(direct - composed);
    rep.passed = rep.difference <= rep.tolerance;
    return rep;
}

SweepReport invariance_sweep(const PolyMap& g, int starts, double t_end, std::uint64_t seed,
                             const FlowOptions& options, int jobs) {
    if (starts < 1) throw std::invalid_argument("starts must be positive");
    const auto& space = g.space();
    const auto dirs = sphere_sample(space, starts, seed);
    const bool coordinate_first = starts >= 2 * space.dim();
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> radius(0.05, 0.95);

    std::vector<Vector> z0(starts);
    for (int i = 0; i < starts; ++i) {
        const double r = (coordinate_first && i < 2 * space.dim()) ? 0.95 : radius(rng);
        z0[i] = r * dirs[i];
    }

    std::vector<FlowResult> results(starts);
    parallel_for(starts, jobs, [&](int i) { results[i] = integrate(g, z0[i], t_end, options); });

    SweepReport rep;
    rep.starts = starts;
    for (int i = 0; i < starts; ++i) {
        const auto& res = results[i];
        const double start_norm = space.norm(z0[i]);
        double peak = *std::max_element(res.trajectory.norms.begin(), res.trajectory.norms.end());
        rep.start_norms.push_back(start_norm);
        rep.max_start_norm = std::max(rep.max_start_norm, start_norm);
        if (res.status == FlowStatus::Escaped) {
            ++rep.escapes;
            peak = std::max(peak, space.norm(*res.witness));
            if (!rep.witness_start) {
                rep.witness_start = z0[i];
                rep.witness_point = res.witness;
                rep.witness_time = res.stop_time;
            }
        } else if (res.status == FlowStatus::StepUnderflow) {
            ++rep.failures;
        }
        rep.max_norms.push_back(peak);
        rep.max_norm = std::max(rep.max_norm, peak);
    }
    return rep;
}

ProbeReport invariant_ball_probe(const PolyMap& f, double theta, double a,
                                 const std::vector<double>& radius_grid,
                                 const ProbeBudget& budget) {
    const auto& space = f.space();
    if (space.norm(f.constant()) > 1e-14)
        throw std::invalid_argument("invariant ball probe needs F(0) = 0");
    const int n = space.dim();

    ProbeReport rep;
    const Matrix m = std::polar(1.0, theta) * f.linear() - a * Matrix::Identity(n, n);
    Matrix power = m;
    for (int k = 1; k <= budget.iterations; ++k) {
        if (!power.allFinite()) {
            rep.power_norms.push_back(std::numeric_limits<double>::infinity());
            break;
        }
        rep.power_norms.push_back(operator_norm(space, power, budget.norm_search).value);
        power = power * m;
    }
    const auto half = rep.power_norms.begin() + rep.power_norms.size() / 2;
    const double first = *std::max_element(rep.power_norms.begin(), half);
    const double second = *std::max_element(half, rep.power_norms.end());
    rep.power_sup = std::max(first, second);
    rep.power_bounded = static_cast<int>(rep.power_norms.size()) == budget.iterations &&
                        std::isfinite(rep.power_sup) && second <= 1.5 * std::max(first, 1e-300);

    const auto dirs = sphere_sample(space, budget.starts, budget.seed);
    for (double r : radius_grid) {
        ProbeRow row;
        row.radius = r;
        row.r_out = r;
        bool diverged = false;
        for (const auto& d : dirs) {
            Vector z = r * d;
            for (int k = 0; k < budget.iterations && !diverged; ++k) {
                z = f.evaluate_entire(z);
                const double nz = space.norm(z);
                if (!std::isfinite(nz) || nz > 1e8) {
                    diverged = true;
                    row.r_out = std::numeric_limits<double>::infinity();
                } else {
                    row.r_out = std::max(row.r_out, nz);
                }
            }
            if (diverged) break;
        }
        row.invariant = !diverged && row.r_out < 1.0;
        if (row.invariant &&
            (!rep.smallest_invariant_radius || r < *rep.smallest_invariant_radius))
            rep.smallest_invariant_radius = r;
        rep.rows.push_back(row);
    }
    return rep;
}

std::string trajectory_csv(const Trajectory& tr) {
    std::string out = "t";
    const int n = tr.points.empty() ? 0 : static_cast<int>(tr.points.front().size());
    for (int j = 1; j <= n; ++j)
        out += ",re_z" + std::to_string(j) + ",im_z" + std::to_string(j);
    out += ",norm\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        out += fmt(tr.times[i]);
        for (int j = 0; j < n; ++j) {
            out += ',' + fmt(tr.points[i][j].real());
            out += ',' + fmt(tr.points[i][j].imag());
        }
        out += ',' + fmt(tr.norms[i]) + '\n';
    }
    return out;
}

}  // namespace hologen
