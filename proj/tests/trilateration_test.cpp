#include <gtest/gtest.h>

#include <random>

#include "agl/trilateration.hpp"
#include "oracle.hpp"

using namespace agl;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

std::vector<Point> l_shape() { return {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}; }

TowerSet towers(std::initializer_list<Point> pts) {
  std::vector<Tower> t;
  for (const auto& p : pts) t.push_back({"t" + std::to_string(t.size()), p});
  return TowerSet(std::move(t));
}

// Signals computed from the oracle visibility test.
SignalSet oracle_signals(const std::vector<Point>& ring, const TowerSet& ts, const Point& p) {
  SignalSet s;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (oracle::segment_inside(ring, ts[i].pos, p)) s.push_back({i, oracle::d2(ts[i].pos, p)});
  return s;
}

}  // namespace

TEST(TowerSet, RejectsSharedPositions) {
  EXPECT_THROW(towers({{0, 0}, {1, 0}, {0, 0}}), GeometryError);
  EXPECT_EQ(towers({{0, 0}, {1, 0}}).size(), 2u);
}

TEST(VisibleTowers, ConvexPolygonHearsEveryTower) {
  const SimplePolygon sq({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const auto ts = towers({{0, 0}, {4, 0}, {2, 4}});
  const Point p(1, 3);
  const auto s = visible_towers(sq, ts, p);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], (Signal{0, 10}));
  EXPECT_EQ(s[1], (Signal{1, 18}));
  EXPECT_EQ(s[2], (Signal{2, 2}));
}

TEST(VisibleTowers, ReflexCornerBlocksTheSignal) {
  const auto ring = l_shape();
  const SimplePolygon l(ring);
  const auto ts = towers({{q(7, 4), q(3, 4)}, {0, 0}});
  const Point p(q(3, 4), q(7, 4));
  EXPECT_TRUE(oracle::segment_inside(ring, {q(7, 4), q(1, 8)}, {q(1, 8), q(7, 4)}));
  EXPECT_FALSE(oracle::segment_inside(ring, ts[0].pos, p));
  const auto s = visible_towers(l, ts, p);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].tower, 1u);
  EXPECT_EQ(visible_towers(l, ts, {0, 0})[1], (Signal{1, 0}));
  EXPECT_THROW(visible_towers(l, ts, {3, 3}), GeometryError);
}

TEST(VisibleTowers, MatchesOracleOnLShape) {
  const auto ring = l_shape();
  const SimplePolygon l(ring);
  const auto ts = towers({{2, 0}, {0, 2}, {1, 1}, {q(1, 2), q(3, 2)}});
  for (long i = 0; i <= 8; ++i)
    for (long j = 0; j <= 8; ++j) {
      const Point p(q(i, 4), q(j, 4));
      if (!contains(l, p)) continue;
      EXPECT_EQ(visible_towers(l, ts, p), oracle_signals(ring, ts, p)) << to_string(p);
    }
}

TEST(Localize, ThreeNonCollinearTowersGiveAUniquePoint) {
  const SimplePolygon sq({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const auto ts = towers({{0, 0}, {4, 0}, {0, 4}});
  const Point p(q(5, 3), q(7, 2));
  const auto r = localize(sq, ts, visible_towers(sq, ts, p));
  ASSERT_TRUE(r.unique());
  EXPECT_EQ(r.candidates, std::vector<Point>{p});
}

TEST(Localize, TwoTowersOnAnEdgeLeaveTheMirrorOutside) {
  const SimplePolygon sq({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const auto ts = towers({{0, 0}, {4, 0}});
  const Point p(1, 3);
  const auto r = localize(sq, ts, visible_towers(sq, ts, p));
  ASSERT_TRUE(r.unique());
  EXPECT_EQ(r.candidates[0], p);
}

TEST(Localize, TwoTowersInsideAreAmbiguous) {
  const SimplePolygon sq({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const auto ts = towers({{1, 2}, {3, 2}});
  const Point p(2, 3);
  const auto r = localize(sq, ts, visible_towers(sq, ts, p));
  EXPECT_EQ(r.status, LocalizationResult::Status::Ambiguous);
  ASSERT_EQ(r.candidates.size(), 2u);
  EXPECT_NE(std::find(r.candidates.begin(), r.candidates.end(), Point(2, 1)), r.candidates.end());
}

TEST(Localize, OneOrNoTowerIsUnderdetermined) {
  const SimplePolygon sq({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const auto ts = towers({{0, 0}});
  auto r = localize(sq, ts, visible_towers(sq, ts, {1, 1}));
  EXPECT_EQ(r.status, LocalizationResult::Status::Underdetermined);
  ASSERT_TRUE(r.arc_center && r.arc_dist2);
  EXPECT_EQ(*r.arc_center, Point(0, 0));
  EXPECT_EQ(*r.arc_dist2, 2);
  EXPECT_EQ(localize(sq, ts, {}).status, LocalizationResult::Status::Underdetermined);
  EXPECT_TRUE(localize(sq, ts, visible_towers(sq, ts, {0, 0})).unique());
}

TEST(Localize, InconsistentSignalsThrow) {
  const SimplePolygon sq({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const auto ts = towers({{0, 0}, {4, 0}, {0, 4}});
  EXPECT_THROW(localize(sq, ts, {{0, 1}, {1, 1}, {2, 1}}), InconsistentSignals);
  // Correct distances but a tower reported silent.
  const Point p(1, 1);
  SignalSet s = visible_towers(sq, ts, p);
  s.pop_back();
  EXPECT_THROW(localize(sq, ts, s), InconsistentSignals);
}

TEST(Localize, RecoversEveryLatticePointOfTheLShape) {
  const auto ring = l_shape();
  const SimplePolygon l(ring);
  const auto ts = towers({{0, 0}, {2, 0}, {0, 2}, {q(1, 2), q(1, 2)}});
  for (long i = 0; i <= 8; ++i)
    for (long j = 0; j <= 8; ++j) {
      const Point p(q(i, 4), q(j, 4));
      if (!contains(l, p)) continue;
      const auto r = localize(l, ts, oracle_signals(ring, ts, p));
      ASSERT_NE(r.status, LocalizationResult::Status::Underdetermined) << to_string(p);
      EXPECT_NE(std::find(r.candidates.begin(), r.candidates.end(), p), r.candidates.end());
      for (const auto& c : r.candidates)
        EXPECT_EQ(oracle_signals(ring, ts, c), oracle_signals(ring, ts, p));
    }
}

TEST(Indistinguishable, Examples) {
  const SimplePolygon sq({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const auto edge = towers({{0, 0}, {4, 0}});
  EXPECT_FALSE(indistinguishable(sq, edge, {1, 1}, {1, 3}));
  EXPECT_FALSE(indistinguishable(sq, edge, {1, 1}, {1, 1}));

  const SimplePolygon tri({{0, 0}, {4, 0}, {2, 4}});
  const auto axis = towers({{2, 0}, {2, 4}});
  const Point p(q(3, 2), 1);
  const Point m = reflect_across_line(p, Line({2, 0}, {2, 4}));
  EXPECT_EQ(m, Point(q(5, 2), 1));
  EXPECT_TRUE(indistinguishable(sq, axis, p, m));
  EXPECT_TRUE(indistinguishable(tri, axis, p, m));
}

TEST(ExactSqrt, PerfectSquaresOnly) {
  EXPECT_EQ(exact_sqrt(q(9, 4)), q(3, 2));
  EXPECT_EQ(exact_sqrt(q(0)), q(0));
  EXPECT_FALSE(exact_sqrt(q(2)));
  EXPECT_FALSE(exact_sqrt(q(1, 2)));
  EXPECT_FALSE(exact_sqrt(q(-4)));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(1, 100000);
  for (int i = 0; i < 200; ++i) {
    const Rational r = q(d(rng), d(rng));
    EXPECT_EQ(exact_sqrt(r * r), r);
  }
}
