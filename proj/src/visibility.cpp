#include "agl/visibility.hpp"

#include <algorithm>
#include <optional>

namespace agl {
namespace {

Point perp_ccw(const Point& d) { return {-d.y, d.x}; }

// Upper half (angle in [0, pi)) sorts before lower half.
bool upper_half(const Point& d) {
  return d.y > 0 || (d.y == 0 && d.x > 0);
}

bool angle_less(const Point& a, const Point& b) {
  bool ua = upper_half(a);
  bool ub = upper_half(b);
  if (ua != ub) return ua;
  return cross(a, b) > 0;
}

bool same_direction(const Point& a, const Point& b) {
  return cross(a, b) == 0 && dot(a, b) > 0;
}

// Some direction strictly inside the counterclockwise wedge from a to b.
Point wedge_interior(const Point& a, const Point& b) {
  Rational c = cross(a, b);
  if (c > 0) return a + b;
  if (c == 0) return perp_ccw(a);  // opposite directions
  return Point{0, 0} - (a + b);
}

std::vector<Point> normalize_convex(std::vector<Point> pts) {
  std::vector<Point> out;
  for (auto& p : pts)
    if (out.empty() || out.back() != p) out.push_back(std::move(p));
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  if (out.size() <= 1) return out;
  if (signed_area2(out) == 0) {
    auto [lo, hi] = std::minmax_element(out.begin(), out.end(), lex_less);
    std::vector<Point> seg{*lo};
    if (*hi != *lo) seg.push_back(*hi);
    return seg;
  }
  bool changed = true;
  while (changed && out.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Point& p = out[(i + out.size() - 1) % out.size()];
      const Point& q = out[(i + 1) % out.size()];
      if (orientation(p, out[i], q) == Orientation::Collinear) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return out;
}

// Keep the closed half-plane to the left of a->b.
std::vector<Point> clip(const std::vector<Point>& poly, const Point& a,
                        const Point& b) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  if (n == 1) {
    if (orientation(a, b, poly[0]) != Orientation::Right) out.push_back(poly[0]);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point& cur = poly[i];
    const Point& nxt = poly[(i + 1) % n];
    Orientation oc = orientation(a, b, cur);
    Orientation on = orientation(a, b, nxt);
    if (oc != Orientation::Right) out.push_back(cur);
    if ((oc == Orientation::Left && on == Orientation::Right) ||
        (oc == Orientation::Right && on == Orientation::Left))
      out.push_back(intersect(Line(a, b), Line(cur, nxt)));
  }
  return out;
}

}  // namespace

bool is_reflex_vertex(const SimplePolygon& poly, std::size_t i) {
  const std::size_t n = poly.size();
  return orientation(poly.vertex(i + n - 1), poly.vertex(i), poly.vertex(i + 1)) ==
         Orientation::Right;
}

VisibilityPolygon visibility_polygon(const SimplePolygon& poly, const Point& u) {
  const Location loc = point_in_polygon(poly, u);
  if (loc == Location::Exterior)
    throw GeometryError("viewpoint outside polygon: " + to_string(u));

  VisibilityPolygon result{poly, u, false};
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (poly.vertex(i) == u && is_reflex_vertex(poly, i))
      result.viewpoint_on_reflex_vertex = true;

  std::vector<Point> dirs;
  for (const auto& v : poly.vertices()) {
    if (v == u) continue;
    if (!segment_in_polygon_unchecked(poly, u, v)) continue;
    dirs.push_back(v - u);
  }
  std::sort(dirs.begin(), dirs.end(), angle_less);
  std::vector<Point> critical;
  for (auto& d : dirs)
    if (critical.empty() || !same_direction(critical.back(), d))
      critical.push_back(std::move(d));
  if (critical.size() >= 2 && same_direction(critical.front(), critical.back()))
    critical.pop_back();
  if (critical.size() < 2) throw GeometryError("degenerate visibility at " + to_string(u));

  std::vector<Point> ring;
  const std::size_t k = critical.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Point& d0 = critical[i];
    const Point& d1 = critical[(i + 1) % k];
    const Point mid = wedge_interior(d0, d1);

    // Nearest edge crossed by the open ray u + t*mid, t > 0.
    std::optional<Rational> best_t;
    std::size_t best_edge = 0;
    for (std::size_t e = 0; e < poly.size(); ++e) {
      const Point& c = poly.vertex(e);
      const Point& d = poly.next(e);
      const Point ed = d - c;
      Rational den = cross(mid, ed);
      if (den == 0) continue;
      Rational t = cross(c - u, ed) / den;
      if (t <= 0) continue;
      Rational s = cross(c - u, mid) / den;
      if (s < 0 || s > 1) continue;
      if (!best_t || t < *best_t) {
        best_t = t;
        best_edge = e;
      }
    }
    if (!best_t) {
      // Only an exterior wedge at a boundary viewpoint can miss every edge.
      if (loc != Location::Boundary)
        throw GeometryError("ray escapes polygon from " + to_string(u));
      ring.push_back(u);
      continue;
    }

    if (loc == Location::Boundary) {
      Point probe = u + (*best_t / 2) * mid;
      if (point_in_polygon(poly, probe) == Location::Exterior) {
        ring.push_back(u);
        continue;
      }
    }
    const Line edge_line(poly.vertex(best_edge), poly.next(best_edge));
    ring.push_back(intersect(Line(u, u + d0), edge_line));
    ring.push_back(intersect(Line(u, u + d1), edge_line));
  }

  // Drop repeats and straight-through vertices.
  std::vector<Point> clean;
  for (auto& p : ring)
    if (clean.empty() || clean.back() != p) clean.push_back(std::move(p));
  while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
  bool changed = true;
  while (changed && clean.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      const Point& p = clean[(i + clean.size() - 1) % clean.size()];
      const Point& q = clean[(i + 1) % clean.size()];
      if (orientation(p, clean[i], q) == Orientation::Collinear &&
          dot(clean[i] - p, q - clean[i]) > 0) {
        clean.erase(clean.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  result.region = SimplePolygon::trusted(std::move(clean));
  return result;
}

int Kernel::dimension() const {
  if (vertices_.empty()) return -1;
  if (vertices_.size() == 1) return 0;
  if (vertices_.size() == 2) return 1;
  return 2;
}

bool Kernel::contains(const Point& p) const {
  switch (dimension()) {
    case -1:
      return false;
    case 0:
      return vertices_[0] == p;
    case 1:
      return on_segment(p, vertices_[0], vertices_[1]);
    default:
      for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (orientation(vertices_[i], vertices_[(i + 1) % vertices_.size()], p) ==
            Orientation::Right)
          return false;
      return true;
  }
}

Kernel kernel(const SimplePolygon& poly) {
  const BoundingBox& bb = poly.box();
  std::vector<Point> region{{bb.min_x, bb.min_y},
                            {bb.max_x, bb.min_y},
                            {bb.max_x, bb.max_y},
                            {bb.min_x, bb.max_y}};
  for (std::size_t i = 0; i < poly.size() && !region.empty(); ++i)
    region = normalize_convex(clip(region, poly.vertex(i), poly.next(i)));
  return Kernel(std::move(region));
}

Kernel intersect(const Kernel& a, const Kernel& b) {
  if (a.empty() || b.empty()) return {};
  if (a.dimension() < b.dimension()) return intersect(b, a);
  const auto& bv = b.vertices();
  if (a.dimension() == 2) {
    std::vector<Point> region = bv;
    const auto& av = a.vertices();
    for (std::size_t i = 0; i < av.size() && !region.empty(); ++i)
      region = normalize_convex(clip(region, av[i], av[(i + 1) % av.size()]));
    return Kernel(std::move(region));
  }
  if (b.dimension() == 0) return a.contains(bv[0]) ? b : Kernel{};
  // Two segments.
  const auto& av = a.vertices();
  if (orientation(av[0], av[1], bv[0]) == Orientation::Collinear &&
      orientation(av[0], av[1], bv[1]) == Orientation::Collinear) {
    std::vector<Point> pts;
    for (const auto& p : av)
      if (b.contains(p)) pts.push_back(p);
    for (const auto& p : bv)
      if (a.contains(p)) pts.push_back(p);
    return Kernel(normalize_convex(std::move(pts)));
  }
  if (!segments_intersect(av[0], av[1], bv[0], bv[1])) return {};
  return Kernel({intersect(Line(av[0], av[1]), Line(bv[0], bv[1]))});
}

}  // namespace agl
