#include "agl/trilateration.hpp"

#include <algorithm>

namespace agl {

TowerSet::TowerSet(std::vector<Tower> towers) : towers_(std::move(towers)) {
  for (std::size_t i = 0; i < towers_.size(); ++i)
    for (std::size_t j = i + 1; j < towers_.size(); ++j)
      if (towers_[i].pos == towers_[j].pos)
        throw GeometryError("towers " + towers_[i].label + " and " +
                            towers_[j].label + " share a position");
}

SignalSet visible_towers(const SimplePolygon& poly, const TowerSet& towers,
                         const Point& p) {
  if (!contains(poly, p)) throw GeometryError("agent outside polygon: " + to_string(p));
  SignalSet out;
  for (std::size_t i = 0; i < towers.size(); ++i) {
    const Point& t = towers[i].pos;
    if (segment_in_polygon_unchecked(poly, t, p))
      out.push_back({i, dist2(t, p)});
  }
  return out;
}

std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  mpz_class num = r.get_num();
  mpz_class den = r.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class sn = sqrt(num);
  mpz_class sd = sqrt(den);
  Rational out(sn, sd);
  out.canonicalize();
  return out;
}

namespace {

// Every candidate point consistent with the distances alone.
std::vector<Point> distance_candidates(const TowerSet& towers, const SignalSet& s) {
  const Point& t1 = towers[s[0].tower].pos;
  const Rational& d1 = s[0].dist2;

  // Look for a tower off the line through the first two.
  const Point& t2 = towers[s[1].tower].pos;
  const Rational& d2 = s[1].dist2;
  for (std::size_t k = 2; k < s.size(); ++k) {
    const Point& t3 = towers[s[k].tower].pos;
    if (orientation(t1, t2, t3) == Orientation::Collinear) continue;
    // Subtracting circle equations gives two linear equations in p:
    //   2 (tj - t1) . p = |tj|^2 - |t1|^2 - dj + d1
    const Rational& d3 = s[k].dist2;
    Point a = t2 - t1;
    Point b = t3 - t1;
    Rational r1 = (dot(t2, t2) - dot(t1, t1) - d2 + d1) / 2;
    Rational r2 = (dot(t3, t3) - dot(t1, t1) - d3 + d1) / 2;
    Rational det = cross(a, b);
    Point p{(r1 * b.y - r2 * a.y) / det, (a.x * r2 - b.x * r1) / det};
    for (const auto& sig : s)
      if (dist2(towers[sig.tower].pos, p) != sig.dist2) return {};
    return {p};
  }

  // All towers collinear: intersect the first two circles.
  Point axis = t2 - t1;
  Rational len2 = dot(axis, axis);
  Rational lambda = (d1 - d2 + len2) / (2 * len2);
  Point foot = t1 + lambda * axis;
  // Offset along the normal, measured in units of |axis|.
  Rational h2 = (d1 - lambda * lambda * len2) / len2;
  if (h2 < 0) return {};
  auto h = exact_sqrt(h2);
  if (!h) throw InconsistentSignals("distances admit no rational position");
  Point normal{-axis.y, axis.x};
  std::vector<Point> cands{foot + *h * normal};
  if (*h != 0) cands.push_back(foot - *h * normal);
  std::vector<Point> out;
  for (auto& c : cands) {
    bool ok = true;
    for (const auto& sig : s)
      if (dist2(towers[sig.tower].pos, c) != sig.dist2) ok = false;
    if (ok) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

LocalizationResult localize(const SimplePolygon& poly, const TowerSet& towers,
                            const SignalSet& s) {
  LocalizationResult res;
  if (s.empty()) return res;
  if (s.size() == 1) {
    const Point& t = towers[s[0].tower].pos;
    if (s[0].dist2 == 0) {
      res.status = LocalizationResult::Status::Unique;
      res.candidates = {t};
      return res;
    }
    res.arc_center = t;
    res.arc_dist2 = s[0].dist2;
    return res;
  }

  for (auto& c : distance_candidates(towers, s)) {
    if (!contains(poly, c)) continue;
    if (visible_towers(poly, towers, c) == s) res.candidates.push_back(std::move(c));
  }
  if (res.candidates.empty())
    throw InconsistentSignals("no point of the polygon reproduces the signals");
  res.status = res.candidates.size() == 1 ? LocalizationResult::Status::Unique
                                          : LocalizationResult::Status::Ambiguous;
  return res;
}

bool indistinguishable(const SimplePolygon& poly, const TowerSet& towers,
                       const Point& p, const Point& q) {
  if (p == q) return false;
  return visible_towers(poly, towers, p) == visible_towers(poly, towers, q);
}

}  // namespace agl
