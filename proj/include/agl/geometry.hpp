#pragma once
/**
 * Exact planar primitives over GMP rationals.
 *
 * Every predicate here is exact: there are no tolerances anywhere, which
 * matters because the gadget polygons are full of deliberate collinearities.
 * Distances are only ever handled squared.
 */

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace agl {

// mpq_class results are canonical after every arithmetic operation.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  Rational x;
  Rational y;

  Point() = default;
  Point(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {}
  Point(long x_, long y_) : x(x_), y(y_) {}

  friend bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(const Rational& s, const Point& p);

// Lexicographic (x, then y). Used for deterministic ordering only.
bool lex_less(const Point& a, const Point& b);

Rational dot(const Point& a, const Point& b);
Rational cross(const Point& a, const Point& b);
Rational dist2(const Point& a, const Point& b);
Point midpoint(const Point& a, const Point& b);
// a + t (b - a)
Point lerp(const Point& a, const Point& b, const Rational& t);
std::string to_string(const Point& p);

struct Line {
  Point p;
  Point q;

  Line(Point p_, Point q_);

  friend bool operator==(const Line&, const Line&) = default;
};

struct Segment {
  Point a;
  Point b;
};

enum class Orientation { Right = -1, Collinear = 0, Left = 1 };

Orientation orientation(const Point& p, const Point& q, const Point& r);

struct Parallel {};
struct Coincident {};
using LineIntersection = std::variant<Point, Parallel, Coincident>;

/// Intersection of two lines by the closed-form Cramer expression.
LineIntersection line_intersection(const Line& l1, const Line& l2);

/// Same as line_intersection but throws GeometryError unless the lines cross
/// in exactly one point. Construction code uses this form.
Point intersect(const Line& l1, const Line& l2);

Point reflect_across_line(const Point& p, const Line& l);

// Closed segment test for p on [a, b].
bool on_segment(const Point& p, const Point& a, const Point& b);

// True when closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(const Point& a, const Point& b, const Point& c,
                        const Point& d);

/// Binary magnitude length of the largest of the four component integers.
/// bit_length(0) is 1.
std::size_t bit_length(const Rational& r);
std::size_t bit_length(const Point& p);

enum class Location { Interior, Boundary, Exterior };

struct BoundingBox {
  Rational min_x, min_y, max_x, max_y;

  bool overlaps(const BoundingBox& o) const {
    return !(max_x < o.min_x || o.max_x < min_x || max_y < o.min_y ||
             o.max_y < min_y);
  }
  bool contains(const Point& p) const {
    return min_x <= p.x && p.x <= max_x && min_y <= p.y && p.y <= max_y;
  }
};

BoundingBox bounding_box(const Point& a, const Point& b);

bool is_simple(std::span<const Point> ring);
Rational signed_area2(std::span<const Point> ring);

/**
 * Closed simple polygon, counterclockwise, boundary included.
 *
 * Construction validates the ring (at least three vertices, no repeated
 * vertex, no crossing or touching non-adjacent edges, positive orientation)
 * and caches per-edge bounding boxes for the visibility queries.
 */
class SimplePolygon {
 public:
  explicit SimplePolygon(std::vector<Point> ccw_vertices);

  // Skips validation; for callers that have already checked the ring.
  static SimplePolygon trusted(std::vector<Point> ccw_vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& vertex(std::size_t i) const { return vertices_[i % size()]; }
  const Point& next(std::size_t i) const { return vertices_[(i + 1) % size()]; }
  const BoundingBox& edge_box(std::size_t i) const { return edge_boxes_[i]; }
  const BoundingBox& box() const { return box_; }

 private:
  struct Trusted {};
  SimplePolygon(std::vector<Point> ccw_vertices, Trusted);

  std::vector<Point> vertices_;
  std::vector<BoundingBox> edge_boxes_;
  BoundingBox box_;
};

Location point_in_polygon(const SimplePolygon& poly, const Point& p);

inline bool contains(const SimplePolygon& poly, const Point& p) {
  return point_in_polygon(poly, p) != Location::Exterior;
}

/// True iff every point of the closed segment [a, b] lies in the closed
/// polygon. Grazing the boundary is allowed; leaving it is not.
/// Throws GeometryError if either endpoint is outside the polygon.
bool segment_in_polygon(const SimplePolygon& poly, const Point& a,
                        const Point& b);

// segment_in_polygon without the endpoint precondition check.
bool segment_in_polygon_unchecked(const SimplePolygon& poly, const Point& a,
                                  const Point& b);

}  // namespace agl
