#include "hologen/hull.hpp"

#include <algorithm>
#include <limits>

namespace hologen {

namespace {

double cross(std::complex<double> o, std::complex<double> a, std::complex<double> b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

}  // namespace

std::vector<std::complex<double>> convex_hull(std::vector<std::complex<double>> points) {
    auto less = [](std::complex<double> a, std::complex<double> b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    };
    std::sort(points.begin(), points.end(), less);
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) return points;

    std::vector<std::complex<double>> hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

double support_value(const std::vector<std::complex<double>>& points, std::complex<double> u) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& w : points) best = std::max(best, (std::conj(u) * w).real());
    return best;
}

}  // namespace hologen
