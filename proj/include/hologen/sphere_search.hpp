#pragma once

#include <cstdint>
#include <functional>

#include "hologen/spaces.hpp"

namespace hologen {

struct SearchBudget {
    int samples = 4096;
    int refine_iters = 200;
    int refine_starts = 16;
    std::uint64_t seed = 0;
};

struct SearchResult {
    double value = 0.0;      // after refinement
    double raw_value = 0.0;  // best sampled value before refinement
    Vector argmax;
    int samples = 0;
    int refinement_iters = 0;
    long evaluations = 0;
};

using SphereObjective = std::function<double(const Vector&)>;

/// Derivative-free local ascent on the sphere {|z| = radius}: coordinate
/// moves by +-s and +-i*s followed by renormalization, halving s when no
/// move improves. Returns the number of iterations used.
int refine_on_sphere(const NormedSpace& space, const SphereObjective& objective, Vector& point,
                     double& value, double radius, int max_iters, long* evaluations = nullptr);

/// Sampled-plus-refined maximum of an objective over {|z| = radius}. The
/// result is a lower bound on the true supremum.
SearchResult maximize_on_sphere(const NormedSpace& space, const SphereObjective& objective,
                                const SearchBudget& budget, double radius = 1.0);

}  // namespace hologen
