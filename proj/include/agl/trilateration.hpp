#pragma once
/**
 * Tower/agent signal model.
 *
 * An agent at p hears every tower it sees and learns that tower's position
 * and the squared distance to it. Localization recovers the candidate
 * positions from those signals plus the polygon map and the full tower
 * list, all in exact arithmetic.
 */

#include <optional>
#include <string>
#include <vector>

#include "agl/geometry.hpp"

namespace agl {

struct Tower {
  std::string label;
  Point pos;

  friend bool operator==(const Tower&, const Tower&) = default;
};

/// Towers with pairwise distinct positions.
class TowerSet {
 public:
  TowerSet() = default;
  explicit TowerSet(std::vector<Tower> towers);

  const std::vector<Tower>& towers() const { return towers_; }
  std::size_t size() const { return towers_.size(); }
  const Tower& operator[](std::size_t i) const { return towers_[i]; }

 private:
  std::vector<Tower> towers_;
};

struct Signal {
  std::size_t tower;  // index into the TowerSet
  Rational dist2;

  friend bool operator==(const Signal&, const Signal&) = default;
};

// Ordered by tower index; at most one signal per tower.
using SignalSet = std::vector<Signal>;

SignalSet visible_towers(const SimplePolygon& poly, const TowerSet& towers,
                         const Point& p);

class InconsistentSignals : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LocalizationResult {
  enum class Status { Unique, Ambiguous, Underdetermined };

  Status status = Status::Underdetermined;
  // Unique: one point. Ambiguous: every surviving candidate.
  std::vector<Point> candidates;
  // Underdetermined with a single signal: the circle the agent lies on,
  // clipped (conceptually) to the tower's visibility polygon.
  std::optional<Point> arc_center;
  std::optional<Rational> arc_dist2;

  bool unique() const { return status == Status::Unique; }
};

/// Throws InconsistentSignals when no point of the polygon reproduces `s`.
LocalizationResult localize(const SimplePolygon& poly, const TowerSet& towers,
                            const SignalSet& s);

bool indistinguishable(const SimplePolygon& poly, const TowerSet& towers,
                       const Point& p, const Point& q);

// Exact square root of a rational that is a perfect square, else nullopt.
std::optional<Rational> exact_sqrt(const Rational& r);

}  // namespace agl
