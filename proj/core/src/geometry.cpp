#include "infothermo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "infothermo/error.hpp"

namespace infothermo::geom {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int sign_of(double v, double eps) {
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

bool within_box(const Point2& p, const Point2& a, const Point2& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

double scale_of(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  double s = 0.0;
  for (const Point2* p : {&a, &b, &c, &d}) s = std::max({s, std::abs(p->x), std::abs(p->y)});
  return s;
}

bool segments_touch(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double s = scale_of(a, b, c, d);
  const double eps = 1e-14 * s * s;
  const int o1 = sign_of(cross(a, b, c), eps);
  const int o2 = sign_of(cross(a, b, d), eps);
  const int o3 = sign_of(cross(c, d, a), eps);
  const int o4 = sign_of(cross(c, d, b), eps);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && within_box(c, a, b)) return true;
  if (o2 == 0 && within_box(d, a, b)) return true;
  if (o3 == 0 && within_box(a, c, d)) return true;
  if (o4 == 0 && within_box(b, c, d)) return true;
  return false;
}

// Adjacent edges (a, b) and (b, c) overlap iff they are collinear and c folds
// back onto (a, b) or a onto (b, c).
bool adjacent_overlap(const Point2& a, const Point2& b, const Point2& c) {
  const double s = scale_of(a, b, c, c);
  if (sign_of(cross(a, b, c), 1e-14 * s * s) != 0) return false;
  const double dot = (a.x - b.x) * (c.x - b.x) + (a.y - b.y) * (c.y - b.y);
  return dot > 0.0;
}

bool inside_or_on(const Point2& p, const Point2& a, const Point2& b, const Point2& c) {
  // Triangle (a, b, c) is counterclockwise here.
  return cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point2& l, const Point2& r) { return l.x < r.x || (l.x == r.x && l.y < r.y); });
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

struct SubBox {
  double cx, cy, hx, hy;
};

SubBox random_sub_box(std::mt19937_64& rng, const Box& box) {
  std::uniform_real_distribution<double> frac(0.02, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double w = (box.x_max - box.x_min) * frac(rng);
  const double h = (box.y_max - box.y_min) * frac(rng);
  const double x0 = box.x_min + unit(rng) * (box.x_max - box.x_min - w);
  const double y0 = box.y_min + unit(rng) * (box.y_max - box.y_min - h);
  return {x0 + 0.5 * w, y0 + 0.5 * h, 0.5 * w, 0.5 * h};
}

std::vector<Point2> close(std::vector<Point2> ring) {
  if (signed_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
  ring.push_back(ring.front());
  return ring;
}

}  // namespace

std::vector<Point2> open_ring(std::span<const Point2> ring) {
  std::vector<Point2> out;
  out.reserve(ring.size());
  for (const auto& p : ring) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.back() == out.front()) out.pop_back();
  return out;
}

double signed_area(std::span<const Point2> ring) {
  if (ring.size() < 3) return 0.0;
  const std::size_t n = ring.size();
  // Shift by the first vertex to limit cancellation for rings far from the origin.
  const Point2 o = ring[0];
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % n];
    twice += (a.x - o.x) * (b.y - o.y) - (b.x - o.x) * (a.y - o.y);
  }
  return 0.5 * twice;
}

bool is_simple(std::span<const Point2> ring) {
  const std::vector<Point2> p = open_ring(ring);
  const std::size_t n = p.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = p[i];
    const Point2& b = p[(i + 1) % n];
    const Point2& c = p[(i + 2) % n];
    if (adjacent_overlap(a, b, c)) return false;
  }
  if (n == 3) return true;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = p[i];
    const Point2& b = p[(i + 1) % n];
    const double ax0 = std::min(a.x, b.x), ax1 = std::max(a.x, b.x);
    const double ay0 = std::min(a.y, b.y), ay1 = std::max(a.y, b.y);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Point2& c = p[j];
      const Point2& d = p[(j + 1) % n];
      if (std::max(c.x, d.x) < ax0 || std::min(c.x, d.x) > ax1 ||
          std::max(c.y, d.y) < ay0 || std::min(c.y, d.y) > ay1) {
        continue;
      }
      if (segments_touch(a, b, c, d)) return false;
    }
  }
  return true;
}

std::vector<Triangle> triangulate(std::span<const Point2> ring) {
  std::vector<Point2> v = open_ring(ring);
  if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
  std::vector<Triangle> out;
  if (v.size() < 3) return out;
  out.reserve(v.size() - 2);

  // Collinear when the turning angle's sine is below 1e-12.
  auto collinear = [](const Point2& a, const Point2& b, const Point2& c, double cr) {
    return std::abs(cr) <= 1e-12 * std::hypot(b.x - a.x, b.y - a.y) * std::hypot(c.x - b.x, c.y - b.y);
  };

  std::size_t i = 0;
  std::size_t misses = 0;
  while (v.size() > 3) {
    const std::size_t n = v.size();
    i %= n;
    const Point2& a = v[(i + n - 1) % n];
    const Point2& b = v[i];
    const Point2& c = v[(i + 1) % n];
    const double cr = cross(a, b, c);
    bool clip = false;
    bool emit = false;
    if (collinear(a, b, c, cr)) {
      clip = true;
    } else if (cr > 0.0) {
      clip = true;
      emit = true;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == (i + n - 1) % n || k == (i + 1) % n) continue;
        const Point2& q = v[k];
        if (q == a || q == b || q == c) continue;
        if (inside_or_on(q, a, b, c)) {
          clip = false;
          emit = false;
          break;
        }
      }
    }
    if (clip) {
      if (emit) out.push_back({a, b, c});
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
      misses = 0;
      if (i > 0) --i;
    } else {
      ++i;
      if (++misses > n) {
        throw Error(ErrorCode::precondition_violation,
                    "triangulation found no ear; the ring is not simple");
      }
    }
  }
  if (!collinear(v[0], v[1], v[2], cross(v[0], v[1], v[2]))) out.push_back({v[0], v[1], v[2]});
  return out;
}

std::vector<Point2> random_ring(std::mt19937_64& rng, Shape shape, const Box& box) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const SubBox sb = random_sub_box(rng, box);
  switch (shape) {
    case Shape::rectangle: {
      const double x0 = sb.cx - sb.hx, x1 = sb.cx + sb.hx;
      const double y0 = sb.cy - sb.hy, y1 = sb.cy + sb.hy;
      return close({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
    }
    case Shape::ellipse: {
      const int n = 12 + static_cast<int>(unit(rng) * 53.0);
      const double phase = unit(rng) * 2.0 * std::numbers::pi;
      std::vector<Point2> ring;
      for (int k = 0; k < n; ++k) {
        const double t = phase + 2.0 * std::numbers::pi * k / n;
        ring.push_back({sb.cx + sb.hx * std::cos(t), sb.cy + sb.hy * std::sin(t)});
      }
      return close(std::move(ring));
    }
    case Shape::convex_polygon: {
      for (;;) {
        const int n = 3 + static_cast<int>(unit(rng) * 10.0);
        std::vector<Point2> pts;
        for (int k = 0; k < n; ++k) {
          pts.push_back({sb.cx + sb.hx * (2.0 * unit(rng) - 1.0),
                         sb.cy + sb.hy * (2.0 * unit(rng) - 1.0)});
        }
        auto hull = convex_hull(std::move(pts));
        if (hull.size() >= 3 && std::abs(signed_area(hull)) > 1e-3 * sb.hx * sb.hy) {
          return close(std::move(hull));
        }
      }
    }
    case Shape::star: {
      const int n = 5 + static_cast<int>(unit(rng) * 20.0);
      std::vector<Point2> ring;
      for (int k = 0; k < n; ++k) {
        const double t = 2.0 * std::numbers::pi * (k + 0.8 * unit(rng)) / n;
        const double r = 0.3 + 0.7 * unit(rng);
        ring.push_back({sb.cx + r * sb.hx * std::cos(t), sb.cy + r * sb.hy * std::sin(t)});
      }
      return close(std::move(ring));
    }
  }
  return {};
}

std::vector<Point2> random_convex_ring(std::mt19937_64& rng, const Box& box) {
  std::uniform_int_distribution<int> pick(0, 2);
  static constexpr Shape shapes[] = {Shape::rectangle, Shape::convex_polygon, Shape::ellipse};
  return random_ring(rng, shapes[pick(rng)], box);
}

}  // namespace infothermo::geom
