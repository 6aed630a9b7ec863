#pragma once
// Independent reference implementations used to check the library.
// Written without calling the predicates they are compared against.

#include <algorithm>
#include <optional>
#include <vector>

#include "agl/geometry.hpp"

namespace oracle {

using agl::Point;
using agl::Rational;

inline int sign(const Rational& r) { return sgn(r); }

// Expanded 3x3 determinant |px py 1; qx qy 1; rx ry 1|.
inline int orient(const Point& p, const Point& q, const Point& r) {
  Rational det = p.x * q.y + q.x * r.y + r.x * p.y - p.x * r.y - q.x * p.y - r.x * q.y;
  return sign(det);
}

inline bool on_closed_segment(const Point& p, const Point& a, const Point& b) {
  if (orient(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Lines a1 x + b1 y = c1 written through the normal form.
inline std::optional<Point> meet(const Point& p1, const Point& p2, const Point& p3,
                                 const Point& p4) {
  const Rational a1 = p2.y - p1.y, b1 = p1.x - p2.x, c1 = a1 * p1.x + b1 * p1.y;
  const Rational a2 = p4.y - p3.y, b2 = p3.x - p4.x, c2 = a2 * p3.x + b2 * p3.y;
  const Rational det = a1 * b2 - a2 * b1;
  if (det == 0) return std::nullopt;
  return Point((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det);
}

// Orthogonal projection formula.
inline Point reflect(const Point& p, const Point& a, const Point& b) {
  const Point d = b - a;
  const Rational t = ((p.x - a.x) * d.x + (p.y - a.y) * d.y) / (d.x * d.x + d.y * d.y);
  const Point foot(a.x + t * d.x, a.y + t * d.y);
  return Point(2 * foot.x - p.x, 2 * foot.y - p.y);
}

enum class Where { Inside, Boundary, Outside };

// Winding number with an explicit boundary test.
inline Where locate(const std::vector<Point>& ring, const Point& p) {
  int wn = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % ring.size()];
    if (on_closed_segment(p, a, b)) return Where::Boundary;
    if (a.y <= p.y) {
      if (b.y > p.y && orient(a, b, p) > 0) ++wn;
    } else if (b.y <= p.y && orient(a, b, p) < 0) {
      --wn;
    }
  }
  return wn != 0 ? Where::Inside : Where::Outside;
}

// Closed segment inside the closed polygon: split [a, b] at every parameter
// where it meets the boundary and test each piece at its midpoint.
inline bool segment_inside(const std::vector<Point>& ring, const Point& a, const Point& b) {
  if (locate(ring, a) == Where::Outside || locate(ring, b) == Where::Outside) return false;
  if (a == b) return true;
  const Point d = b - a;
  std::vector<Rational> ts{0, 1};
  auto param = [&](const Point& p) -> Rational {
    return d.x != 0 ? (p.x - a.x) / d.x : (p.y - a.y) / d.y;
  };
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point& c = ring[i];
    const Point& e = ring[(i + 1) % ring.size()];
    for (const Point& v : {c, e})
      if (on_closed_segment(v, a, b)) ts.push_back(param(v));
    if (auto x = meet(a, b, c, e))
      if (on_closed_segment(*x, a, b) && on_closed_segment(*x, c, e)) ts.push_back(param(*x));
  }
  std::sort(ts.begin(), ts.end());
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    if (ts[k] == ts[k + 1]) continue;
    const Rational mid = (ts[k] + ts[k + 1]) / 2;
    if (locate(ring, Point(a.x + mid * d.x, a.y + mid * d.y)) == Where::Outside) return false;
  }
  return true;
}

inline Rational d2(const Point& a, const Point& b) {
  return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
}

inline std::size_t bits(const mpz_class& z) {
  if (z == 0) return 1;
  std::size_t n = 0;
  for (mpz_class v = abs(z); v > 0; v >>= 1) ++n;
  return n;
}

}  // namespace oracle
