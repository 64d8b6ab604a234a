#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hologen/polymaps.hpp"
#include "hologen/sphere_search.hpp"

namespace hologen {

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    double min_dt = 0.0;
    double max_dt = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> points;
    std::vector<double> norms;
    StepStats step_stats;
};

enum class FlowStatus { Completed, Escaped, StepUnderflow };

std::string to_string(FlowStatus s);

struct FlowOptions {
    double rtol = 1e-9;
    double min_step = 1e-14;
    double initial_step = 1e-3;
    long max_steps = 5'000'000;
};

struct FlowResult {
    Trajectory trajectory;
    FlowStatus status = FlowStatus::Completed;
    double stop_time = 0.0;         // t_end, escape time or time of underflow
    std::optional<Vector> witness;  // point past the sphere when escaped
    std::string message;

    bool ok() const { return status == FlowStatus::Completed; }
    const Vector& endpoint() const { return trajectory.points.back(); }
};

/// Dormand-Prince 5(4) for z' = G(z) with PI step control. A step is accepted
/// only if its local error is below rtol (1 + |z|) and it stays inside the
/// ball with error smaller than its distance to the sphere; a confident step
/// across the sphere ends the run as an escape.
FlowResult integrate(const PolyMap& g, const Vector& z0, double t_end,
                     const FlowOptions& options = {});

/// Endpoint of the flow; throws std::runtime_error on escape or underflow.
Vector flow_to(const PolyMap& g, const Vector& z0, double t, const FlowOptions& options = {});

struct SemigroupReport {
    double difference = 0.0;  // |phi_{t+s}(z0) - phi_s(phi_t(z0))|
    double tolerance = 0.0;
    bool passed = false;
};

/// Tolerance defaults to 10 rtol.
SemigroupReport check_semigroup(const PolyMap& g, const Vector& z0, double t, double s,
                                const FlowOptions& options = {}, double tolerance = -1.0);

struct SweepReport {
    int starts = 0;
    int escapes = 0;
    int failures = 0;                  // step underflow
    double max_norm = 0.0;             // over all trajectory nodes
    double max_start_norm = 0.0;
    std::vector<double> start_norms;
    std::vector<double> max_norms;     // per start
    std::optional<Vector> witness_start;  // first escaping start by index
    std::optional<Vector> witness_point;
    double witness_time = 0.0;

    bool passed() const { return escapes == 0 && failures == 0 && max_norm < 1.0; }
};

/// Integrates from `starts` seeded points with |z0| <= 0.95 (coordinate
/// directions first) and tracks the largest norm reached.
SweepReport invariance_sweep(const PolyMap& g, int starts, double t_end, std::uint64_t seed = 0,
                             const FlowOptions& options = {}, int jobs = 1);

struct ProbeRow {
    double radius = 0.0;
    double r_out = 0.0;  // largest iterate norm seen
    bool invariant = false;  // every iterate finite and r_out < 1
};

struct ProbeReport {
    std::vector<double> power_norms;  // |M^k|, k = 1..iterations
    double power_sup = 0.0;
    bool power_bounded = false;
    std::vector<ProbeRow> rows;
    std::optional<double> smallest_invariant_radius;  // empty means none found
};

struct ProbeBudget {
    int iterations = 256;
    int starts = 64;
    std::uint64_t seed = 0;
    SearchBudget norm_search{512, 60, 4, 0};
};

/// Power-boundedness of M = e^{i theta}A - a id and empirical invariant balls
/// for the iterates of F. Throws std::invalid_argument when F(0) != 0.
ProbeReport invariant_ball_probe(const PolyMap& f, double theta, double a,
                                 const std::vector<double>& radius_grid,
                                 const ProbeBudget& budget = {});

/// Columns t, re(z_1), im(z_1), ..., norm.
std::string trajectory_csv(const Trajectory& tr);

}  // namespace hologen
