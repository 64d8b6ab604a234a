#pragma once

#include <complex>
#include <vector>

namespace hologen {

/// Convex hull of points in the plane (Andrew's monotone chain),
/// counter-clockwise, collinear points dropped.
std::vector<std::complex<double>> convex_hull(std::vector<std::complex<double>> points);

/// max over points of Re(conj(u) * w) for a unit direction u.
double support_value(const std::vector<std::complex<double>>& points, std::complex<double> u);

}  // namespace hologen
