#include "infothermo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace infothermo::quad {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             unsigned depth) {
  double err = 0.0;
  // max_depth = 0: a single 15-point Kronrod evaluation with |K15 - G7| as
  // the error estimate; the bisection below is ours so the tolerance is absolute.
  const double value = Rule::integrate(f, a, b, 0, 0.0, &err);
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
  if (err <= tol || err <= floor || depth == 0 || !std::isfinite(value)) return value;
  const double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * tol, depth - 1) + adapt(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 unsigned max_depth, double rel_tol) {
  if (a == b) return 0.0;
  double tol = abs_tol;
  if (rel_tol > 0.0) {
    const double coarse = Rule::integrate(f, a, b, 0, 0.0);
    if (std::isfinite(coarse)) tol = std::max(tol, rel_tol * std::abs(coarse));
  }
  return adapt(f, a, b, tol, max_depth);
}

double integrate_triangle(const std::function<double(double, double)>& f, Point2 a,
                          Point2 b, Point2 c, double abs_tol, double rel_tol) {
  const double ux = b.x - a.x, uy = b.y - a.y;
  const double vx = c.x - b.x, vy = c.y - b.y;
  const double jac = std::abs(ux * vy - uy * vx);
  if (jac == 0.0) return 0.0;
  // P(s, t) = a + s (b - a) + s t (c - b), dA = s |det| ds dt.
  auto outer = [&](double s) {
    auto inner = [&](double t) { return f(a.x + s * ux + s * t * vx, a.y + s * uy + s * t * vy); };
    return s * integrate(inner, 0.0, 1.0, abs_tol / jac, 16, rel_tol);
  };
  return jac * integrate(outer, 0.0, 1.0, abs_tol / jac, 16, rel_tol);
}

}  // namespace infothermo::quad
