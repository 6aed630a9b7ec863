#pragma once

#include <vector>

#include "agl/geometry.hpp"

namespace agl {

struct VisibilityPolygon {
  SimplePolygon region;
  Point viewpoint;
  // The closed-segment rule is still applied, but callers may want to
  // report viewpoints sitting exactly on a reflex vertex separately.
  bool viewpoint_on_reflex_vertex = false;
};

/**
 * Exact visibility polygon of `u` inside `poly`.
 *
 * Directions to every visible vertex split the plane around `u` into
 * wedges; inside one wedge the nearest boundary is a single edge, so the
 * region boundary is that edge clipped to the wedge, stitched along the
 * critical rays. Throws GeometryError if `u` is outside `poly`.
 */
VisibilityPolygon visibility_polygon(const SimplePolygon& poly, const Point& u);

bool is_reflex_vertex(const SimplePolygon& poly, std::size_t i);

/// Convex set of dimension <= 2: empty, a point, a segment or a convex
/// polygon (counterclockwise, no collinear vertices).
class Kernel {
 public:
  Kernel() = default;
  explicit Kernel(std::vector<Point> vertices) : vertices_(std::move(vertices)) {}

  const std::vector<Point>& vertices() const { return vertices_; }
  bool empty() const { return vertices_.empty(); }
  // 0 = point, 1 = segment, 2 = region; -1 when empty.
  int dimension() const;
  bool contains(const Point& p) const;

 private:
  std::vector<Point> vertices_;
};

Kernel kernel(const SimplePolygon& poly);

// Intersection of two convex sets given as kernels.
Kernel intersect(const Kernel& a, const Kernel& b);

inline bool is_star_shaped(const SimplePolygon& poly) {
  return !kernel(poly).empty();
}

}  // namespace agl
