#include "agl/geometry.hpp"

#include <algorithm>
#include <utility>

namespace agl {

Rational make_rational(long num, long den) {
  if (den == 0) throw GeometryError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw GeometryError("bad rational: " + text);
  if (r.get_den() == 0) throw GeometryError("zero denominator: " + text);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

Point operator+(const Point& a, const Point& b) {
  return {a.x + b.x, a.y + b.y};
}
Point operator-(const Point& a, const Point& b) {
  return {a.x - b.x, a.y - b.y};
}
Point operator*(const Rational& s, const Point& p) {
  return {s * p.x, s * p.y};
}

bool lex_less(const Point& a, const Point& b) {
  int c = cmp(a.x, b.x);
  if (c != 0) return c < 0;
  return a.y < b.y;
}

Rational dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
Rational cross(const Point& a, const Point& b) {
  return a.x * b.y - a.y * b.x;
}
Rational dist2(const Point& a, const Point& b) {
  Rational dx = a.x - b.x;
  Rational dy = a.y - b.y;
  return dx * dx + dy * dy;
}
Point midpoint(const Point& a, const Point& b) {
  return {(a.x + b.x) / 2, (a.y + b.y) / 2};
}
Point lerp(const Point& a, const Point& b, const Rational& t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

std::string to_string(const Point& p) {
  return "(" + to_string(p.x) + ", " + to_string(p.y) + ")";
}

Line::Line(Point p_, Point q_) : p(std::move(p_)), q(std::move(q_)) {
  if (p == q) throw GeometryError("line through identical points " + to_string(p));
}

Orientation orientation(const Point& p, const Point& q, const Point& r) {
  // (q - p) x (r - p), expanded to avoid temporaries.
  Rational lhs = (q.x - p.x) * (r.y - p.y);
  Rational rhs = (q.y - p.y) * (r.x - p.x);
  int c = cmp(lhs, rhs);
  if (c > 0) return Orientation::Left;
  if (c < 0) return Orientation::Right;
  return Orientation::Collinear;
}

LineIntersection line_intersection(const Line& l1, const Line& l2) {
  const Rational& x1 = l1.p.x;
  const Rational& y1 = l1.p.y;
  const Rational& x2 = l1.q.x;
  const Rational& y2 = l1.q.y;
  const Rational& x3 = l2.p.x;
  const Rational& y3 = l2.p.y;
  const Rational& x4 = l2.q.x;
  const Rational& y4 = l2.q.y;

  Rational den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4);
  if (den == 0) {
    if (orientation(l1.p, l1.q, l2.p) == Orientation::Collinear)
      return Coincident{};
    return Parallel{};
  }
  Rational d12 = x1 * y2 - y1 * x2;
  Rational d34 = x3 * y4 - y3 * x4;
  Rational x = (d12 * (x3 - x4) - (x1 - x2) * d34) / den;
  Rational y = (d12 * (y3 - y4) - (y1 - y2) * d34) / den;
  return Point{std::move(x), std::move(y)};
}

Point intersect(const Line& l1, const Line& l2) {
  auto r = line_intersection(l1, l2);
  if (auto* p = std::get_if<Point>(&r)) return *p;
  throw GeometryError(std::holds_alternative<Parallel>(r)
                          ? "parallel lines"
                          : "coincident lines");
}

Point reflect_across_line(const Point& p, const Line& l) {
  Point d = l.q - l.p;
  Rational t = dot(p - l.p, d) / dot(d, d);
  Point foot = l.p + t * d;
  return {2 * foot.x - p.x, 2 * foot.y - p.y};
}

BoundingBox bounding_box(const Point& a, const Point& b) {
  BoundingBox bb;
  if (a.x < b.x) {
    bb.min_x = a.x;
    bb.max_x = b.x;
  } else {
    bb.min_x = b.x;
    bb.max_x = a.x;
  }
  if (a.y < b.y) {
    bb.min_y = a.y;
    bb.max_y = b.y;
  } else {
    bb.min_y = b.y;
    bb.max_y = a.y;
  }
  return bb;
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  if (orientation(a, b, p) != Orientation::Collinear) return false;
  return bounding_box(a, b).contains(p);
}

bool segments_intersect(const Point& a, const Point& b, const Point& c,
                        const Point& d) {
  if (!bounding_box(a, b).overlaps(bounding_box(c, d))) return false;
  auto o1 = orientation(a, b, c);
  auto o2 = orientation(a, b, d);
  auto o3 = orientation(c, d, a);
  auto o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 != Orientation::Collinear &&
      o2 != Orientation::Collinear && o3 != Orientation::Collinear &&
      o4 != Orientation::Collinear)
    return true;
  return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) ||
         on_segment(b, c, d);
}

std::size_t bit_length(const Rational& r) {
  std::size_t n = mpz_sizeinbase(r.get_num_mpz_t(), 2);
  std::size_t d = mpz_sizeinbase(r.get_den_mpz_t(), 2);
  return std::max(n, d);
}

std::size_t bit_length(const Point& p) {
  return std::max(bit_length(p.x), bit_length(p.y));
}

Rational signed_area2(std::span<const Point> ring) {
  Rational s = 0;
  for (std::size_t i = 0; i < ring.size(); ++i)
    s += cross(ring[i], ring[(i + 1) % ring.size()]);
  return s;
}

bool is_simple(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (ring[i] == ring[j]) return false;

  std::vector<BoundingBox> boxes;
  boxes.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    boxes.push_back(bounding_box(ring[i], ring[(i + 1) % n]));

  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!boxes[i].overlaps(boxes[j])) continue;
      const Point& c = ring[j];
      const Point& d = ring[(j + 1) % n];
      bool adjacent_next = (j == i + 1);
      bool adjacent_prev = (i == 0 && j == n - 1);
      if (adjacent_next) {
        // Shared vertex b == c; anything else in common means folding back.
        if (orientation(a, b, d) == Orientation::Collinear &&
            dot(a - b, d - b) > 0)
          return false;
        continue;
      }
      if (adjacent_prev) {
        if (orientation(c, d, b) == Orientation::Collinear &&
            dot(c - a, b - a) > 0)
          return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

SimplePolygon::SimplePolygon(std::vector<Point> ccw_vertices)
    : SimplePolygon(std::move(ccw_vertices), Trusted{}) {
  if (vertices_.size() < 3) throw GeometryError("polygon needs 3 vertices");
  if (!is_simple(vertices_)) throw GeometryError("polygon is not simple");
  if (signed_area2(vertices_) <= 0)
    throw GeometryError("polygon is not counterclockwise");
}

SimplePolygon SimplePolygon::trusted(std::vector<Point> ccw_vertices) {
  return SimplePolygon(std::move(ccw_vertices), Trusted{});
}

SimplePolygon::SimplePolygon(std::vector<Point> ccw_vertices, Trusted)
    : vertices_(std::move(ccw_vertices)) {
  edge_boxes_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    edge_boxes_.push_back(bounding_box(vertices_[i], next(i)));
  if (!vertices_.empty()) {
    box_ = bounding_box(vertices_[0], vertices_[0]);
    for (const auto& v : vertices_) {
      if (v.x < box_.min_x) box_.min_x = v.x;
      if (v.x > box_.max_x) box_.max_x = v.x;
      if (v.y < box_.min_y) box_.min_y = v.y;
      if (v.y > box_.max_y) box_.max_y = v.y;
    }
  }
}

Location point_in_polygon(const SimplePolygon& poly, const Point& p) {
  if (!poly.box().contains(p)) return Location::Exterior;
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly.vertex(i);
    const Point& b = poly.next(i);
    const BoundingBox& bb = poly.edge_box(i);
    if (bb.contains(p) && orientation(a, b, p) == Orientation::Collinear)
      return Location::Boundary;
    // Half-open crossing rule on the horizontal ray to +x.
    bool a_above = a.y > p.y;
    bool b_above = b.y > p.y;
    if (a_above == b_above) continue;
    if (p.x > bb.max_x) continue;
    // Edge crosses the ray's supporting line; check which side of p.
    Orientation o = orientation(a, b, p);
    if ((b_above && o == Orientation::Left) ||
        (a_above && o == Orientation::Right))
      inside = !inside;
  }
  return inside ? Location::Interior : Location::Exterior;
}

bool segment_in_polygon_unchecked(const SimplePolygon& poly, const Point& a,
                                  const Point& b) {
  if (a == b) return true;
  const BoundingBox seg_box = bounding_box(a, b);
  const Point dir = b - a;
  // Break points: polygon vertices lying strictly inside the segment.
  std::vector<std::pair<Rational, Point>> breaks;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!seg_box.overlaps(poly.edge_box(i))) continue;
    const Point& c = poly.vertex(i);
    const Point& d = poly.next(i);
    Orientation oc = orientation(a, b, c);
    Orientation od = orientation(a, b, d);
    if (oc == Orientation::Collinear) {
      if (c != a && c != b && seg_box.contains(c))
        breaks.emplace_back(dot(c - a, dir), c);
      continue;
    }
    if (od == Orientation::Collinear || oc == od) continue;
    Orientation oa = orientation(c, d, a);
    Orientation ob = orientation(c, d, b);
    if (oa != Orientation::Collinear && ob != Orientation::Collinear &&
        oa != ob)
      return false;  // proper crossing
  }
  std::sort(breaks.begin(), breaks.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  const Point* prev = &a;
  for (const auto& br : breaks) {
    if (point_in_polygon(poly, midpoint(*prev, br.second)) == Location::Exterior)
      return false;
    prev = &br.second;
  }
  return point_in_polygon(poly, midpoint(*prev, b)) != Location::Exterior;
}

bool segment_in_polygon(const SimplePolygon& poly, const Point& a,
                        const Point& b) {
  if (!contains(poly, a) || !contains(poly, b))
    throw GeometryError("segment endpoint outside polygon");
  return segment_in_polygon_unchecked(poly, a, b);
}

}  // namespace agl
