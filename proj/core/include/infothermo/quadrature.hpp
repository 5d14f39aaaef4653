#pragma once

#include <functional>

#include "infothermo/geometry.hpp"

namespace infothermo::quad {

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b]. Intervals are
/// bisected until the Kronrod-Gauss difference on each piece is below its
/// share of the tolerance, or max_depth is reached. The tolerance is
/// max(abs_tol, rel_tol |I0|) with I0 the single-panel estimate.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, unsigned max_depth = 20, double rel_tol = 0.0);

using geom::Point2;

/// Integral of f(x, y) over the triangle (a, b, c) through the collapsed
/// (Duffy) map of the unit square, with nested adaptive 1-D rules.
double integrate_triangle(const std::function<double(double, double)>& f,
                          Point2 a, Point2 b, Point2 c, double abs_tol = 1e-12,
                          double rel_tol = 0.0);

}  // namespace infothermo::quad
