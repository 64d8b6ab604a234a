#include "hologen/sphere_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hologen {

namespace {

// |<u, w>| above this (Euclidean unit vectors) counts as the same start.
constexpr double kSameStartOverlap = 0.9;

}  // namespace

int refine_on_sphere(const NormedSpace& space, const SphereObjective& objective, Vector& point,
                     double& value, double radius, int max_iters, long* evaluations) {
    static const Complex moves[] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
    const int n = space.dim();
    double step = 0.25;
    int iter = 0;
    for (; iter < max_iters; ++iter) {
        bool improved = false;
        for (int k = 0; k < n; ++k) {
            for (const Complex& dir : moves) {
                Vector trial = point;
                trial[k] += dir * (step * radius);
                const double nt = space.norm(trial);
                if (nt == 0.0) continue;
                trial *= radius / nt;
                const double f = objective(trial);
                if (evaluations) ++*evaluations;
                if (f > value) {
                    value = f;
                    point = std::move(trial);
                    improved = true;
                }
            }
        }
        if (improved)
            step = std::min(0.5, step * 1.5);
        else
            step *= 0.5;
        if (step < 1e-13) break;
    }
    return iter;
}

SearchResult maximize_on_sphere(const NormedSpace& space, const SphereObjective& objective,
                                const SearchBudget& budget, double radius) {
    if (budget.samples < 1) throw std::invalid_argument("search budget needs >= 1 sample");
    if (!(radius > 0.0)) throw std::invalid_argument("search radius must be positive");
    const auto dirs = sphere_sample(space, budget.samples, budget.seed);

    std::vector<double> values(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) values[i] = objective(radius * dirs[i]);

    std::vector<std::size_t> order(dirs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    // Refine from the best samples that are pairwise apart up to a unimodular
    // phase, so that distinct local maxima each get a start.
    const std::size_t wanted = static_cast<std::size_t>(std::max(1, budget.refine_starts));
    std::vector<Vector> unit(dirs.size());
    std::vector<std::size_t> picked;
    const auto far_from_picked = [&](std::size_t i) {
        for (std::size_t j : picked) {
            if (std::abs(unit[j].dot(unit[i])) > kSameStartOverlap) return false;
        }
        return true;
    };
    for (std::size_t i : order) {
        if (picked.size() == wanted) break;
        unit[i] = dirs[i] / dirs[i].norm();
        if (far_from_picked(i)) picked.push_back(i);
    }
    for (std::size_t i : order) {
        if (picked.size() == wanted) break;
        if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
    }

    SearchResult result;
    result.samples = static_cast<int>(dirs.size());
    result.evaluations = static_cast<long>(dirs.size());
    result.raw_value = values[order[0]];
    result.value = result.raw_value;
    result.argmax = radius * dirs[order[0]];

    for (std::size_t i : picked) {
        Vector point = radius * dirs[i];
        double value = values[i];
        const int used = refine_on_sphere(space, objective, point, value, radius,
                                          budget.refine_iters, &result.evaluations);
        result.refinement_iters = std::max(result.refinement_iters, used);
        if (value > result.value) {
            result.value = value;
            result.argmax = std::move(point);
        }
    }
    return result;
}

}  // namespace hologen
