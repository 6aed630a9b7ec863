#include <gtest/gtest.h>

#include "agl/reduction.hpp"
#include "agl/visibility.hpp"
#include "oracle.hpp"

using namespace agl;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

std::vector<Point> l_shape() { return {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}; }

long floor_of(const Rational& r) {
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return z.get_si();
}

long ceil_of(const Rational& r) {
  mpz_class z;
  mpz_cdiv_q(z.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return z.get_si();
}

// Interior lattice points of the polygon at spacing 1/den over its box.
std::vector<Point> lattice(const SimplePolygon& poly, long den) {
  std::vector<Point> out;
  const auto& bb = poly.box();
  const long x0 = floor_of(bb.min_x * den);
  const long x1 = ceil_of(bb.max_x * den);
  const long y0 = floor_of(bb.min_y * den);
  const long y1 = ceil_of(bb.max_y * den);
  for (long i = x0; i <= x1; ++i)
    for (long j = y0; j <= y1; ++j) {
      Point p(q(i, den), q(j, den));
      if (point_in_polygon(poly, p) == Location::Interior) out.push_back(p);
    }
  return out;
}

}  // namespace

TEST(VisibilityPolygon, ConvexPentagonSeesEverything) {
  const SimplePolygon pent({{0, 0}, {4, 0}, {5, 3}, {2, 5}, {-1, 3}});
  const auto v = visibility_polygon(pent, {2, 2});
  EXPECT_EQ(v.region.size(), 5u);
  for (const auto& p : pent.vertices()) EXPECT_EQ(point_in_polygon(v.region, p), Location::Boundary);
  EXPECT_EQ(signed_area2(v.region.vertices()), signed_area2(pent.vertices()));
}

TEST(VisibilityPolygon, LShapeHidesPointsBehindTheReflexVertex) {
  const auto ring = l_shape();
  const SimplePolygon l(ring);
  const Point u(q(1, 2), q(1, 2));
  const auto v = visibility_polygon(l, u);
  const Point seen1(q(7, 4), q(1, 2)), seen2(q(7, 4), q(1, 8)), hidden(q(3, 2), q(5, 4));
  EXPECT_TRUE(oracle::segment_inside(ring, u, seen1));
  EXPECT_TRUE(oracle::segment_inside(ring, u, seen2));
  EXPECT_EQ(oracle::locate(ring, hidden), oracle::Where::Outside);
  EXPECT_TRUE(contains(v.region, seen1));
  EXPECT_TRUE(contains(v.region, seen2));
  EXPECT_FALSE(contains(v.region, hidden));
}

TEST(VisibilityPolygon, RegionMatchesSegmentOracle) {
  const std::vector<Point> ring{{0, 0}, {6, 0}, {6, 4}, {4, 4}, {4, 1}, {2, 1}, {2, 4}, {0, 4}};
  const SimplePolygon poly(ring);
  for (const Point u : {Point(1, 3), Point(3, q(1, 2)), Point(5, 2), Point(4, 1), Point(0, 0)}) {
    const auto v = visibility_polygon(poly, u);
    for (const auto& p : lattice(poly, 4))
      EXPECT_EQ(contains(v.region, p), oracle::segment_inside(ring, u, p))
          << to_string(u) << " -> " << to_string(p);
  }
}

TEST(VisibilityPolygon, LiteralPentagonFromInsideTriangleAbc) {
  const Gadget g = literal_gadget();
  const Point a = g.index.point("a"), b = g.index.point("b"), c = g.index.point("c");
  const Point u = lerp(lerp(a, b, q(1, 3)), c, q(1, 3));
  const auto v = visibility_polygon(g.polygon, u);
  for (const auto& p : g.polygon.vertices()) EXPECT_TRUE(contains(v.region, p));
  for (const auto& p : lattice(g.polygon, 8)) {
    EXPECT_TRUE(oracle::segment_inside(g.polygon.vertices(), u, p));
    EXPECT_TRUE(contains(v.region, p));
  }
}

TEST(VisibilityPolygon, ReflexViewpointIsFlagged) {
  const SimplePolygon l(l_shape());
  EXPECT_TRUE(visibility_polygon(l, {1, 1}).viewpoint_on_reflex_vertex);
  EXPECT_FALSE(visibility_polygon(l, {0, 0}).viewpoint_on_reflex_vertex);
  EXPECT_THROW(visibility_polygon(l, {3, 3}), GeometryError);
}

TEST(Kernel, ConvexPolygonIsItsOwnKernel) {
  const SimplePolygon quad({{0, 0}, {3, 0}, {4, 2}, {1, 3}});
  const Kernel k = kernel(quad);
  EXPECT_EQ(k.dimension(), 2);
  auto got = k.vertices();
  auto want = quad.vertices();
  std::sort(got.begin(), got.end(), lex_less);
  std::sort(want.begin(), want.end(), lex_less);
  EXPECT_EQ(got, want);
  EXPECT_TRUE(is_star_shaped(quad));
}

TEST(Kernel, LiteralPentagonContainsBothTowerLoci) {
  const Gadget g = literal_gadget();
  const auto& ring = g.polygon.vertices();
  const Kernel k = kernel(g.polygon);
  ASSERT_EQ(k.dimension(), 2);
  EXPECT_TRUE(is_star_shaped(g.polygon));
  const Point a = g.index.point("a"), b = g.index.point("b"), x = g.index.point("x");
  for (long t = 0; t <= 8; ++t) {
    EXPECT_TRUE(k.contains(lerp(a, b, q(t, 8))));
    EXPECT_TRUE(k.contains(lerp(x, b, q(t, 8))));
  }
  // A lattice point is in the kernel exactly when it sees every vertex.
  for (const auto& p : lattice(g.polygon, 8)) {
    bool sees_all = true;
    for (const auto& v : ring) sees_all = sees_all && oracle::segment_inside(ring, p, v);
    EXPECT_EQ(k.contains(p), sees_all) << to_string(p);
  }
}

TEST(Kernel, TallUIsNotStarShaped) {
  // The inner walls of the two arms face away from each other.
  const std::vector<Point> ring{{0, 0}, {6, 0}, {6, 4}, {5, 4}, {5, 1}, {1, 1}, {1, 4}, {0, 4}};
  ASSERT_TRUE(is_simple(ring));
  const SimplePolygon poly(ring);
  // Oracle: every candidate point on two edge lines fails some half-plane.
  bool feasible = false;
  for (std::size_t i = 0; i < ring.size(); ++i)
    for (std::size_t j = i + 1; j < ring.size(); ++j) {
      auto p = oracle::meet(ring[i], ring[(i + 1) % ring.size()], ring[j],
                            ring[(j + 1) % ring.size()]);
      if (!p) continue;
      bool ok = true;
      for (std::size_t e = 0; e < ring.size(); ++e)
        ok = ok && oracle::orient(ring[e], ring[(e + 1) % ring.size()], *p) >= 0;
      feasible = feasible || ok;
    }
  EXPECT_FALSE(feasible);
  EXPECT_TRUE(kernel(poly).empty());
  EXPECT_FALSE(is_star_shaped(poly));
}

TEST(Kernel, InsideEveryVisibilityPolygonOfItsPoints) {
  const std::vector<Point> ring{{0, 0}, {6, 0}, {6, 4}, {3, 2}, {0, 4}};
  const SimplePolygon poly(ring);
  const Kernel k = kernel(poly);
  ASSERT_EQ(k.dimension(), 2);
  for (const auto& u : k.vertices()) {
    const auto v = visibility_polygon(poly, u);
    for (const auto& w : k.vertices()) EXPECT_TRUE(contains(v.region, w));
    EXPECT_EQ(signed_area2(v.region.vertices()), signed_area2(ring));
  }
}

TEST(Kernel, DegenerateIntersections) {
  const Kernel seg({Point(0, 0), Point(2, 0)});
  const Kernel seg2({Point(1, -1), Point(1, 1)});
  const Kernel cross = intersect(seg, seg2);
  ASSERT_EQ(cross.dimension(), 0);
  EXPECT_EQ(cross.vertices()[0], Point(1, 0));
  const Kernel overlap = intersect(seg, Kernel({Point(1, 0), Point(3, 0)}));
  ASSERT_EQ(overlap.dimension(), 1);
  EXPECT_TRUE(overlap.contains(Point(q(3, 2), 0)));
  EXPECT_TRUE(intersect(seg, Kernel({Point(0, 1), Point(2, 1)})).empty());
}
