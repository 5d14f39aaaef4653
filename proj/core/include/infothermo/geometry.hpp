#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace infothermo::geom {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

using Triangle = std::array<Point2, 3>;

/// Shoelace signed area. The ring may be given open or closed (last point
/// repeating the first); positive means counterclockwise.
double signed_area(std::span<const Point2> ring);

/// True when no two non-adjacent edges of the ring touch and adjacent edges
/// meet only at their shared vertex. Zero-length edges are ignored.
bool is_simple(std::span<const Point2> ring);

/// Ear-clipping triangulation of a simple ring. Triangles come out
/// counterclockwise whatever the input orientation. Collinear vertices are
/// dropped without emitting a triangle. Throws Error(precondition_violation)
/// if no ear can be found, which only happens for non-simple input.
std::vector<Triangle> triangulate(std::span<const Point2> ring);

/// Drop the closing duplicate and exact consecutive repeats.
std::vector<Point2> open_ring(std::span<const Point2> ring);

struct Box {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
};

enum class Shape : std::uint8_t { rectangle, convex_polygon, ellipse, star };

/// Random closed counterclockwise ring (first point repeated at the end)
/// inside the box. star produces simple but generally non-convex rings.
std::vector<Point2> random_ring(std::mt19937_64& rng, Shape shape, const Box& box);

/// Shape drawn uniformly from rectangle, convex_polygon and ellipse.
std::vector<Point2> random_convex_ring(std::mt19937_64& rng, const Box& box);

}  // namespace infothermo::geom
