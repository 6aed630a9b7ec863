#pragma once
/**
 * 3CNF -> art gallery localization compiler.
 *
 * The output polygon is laid out with the variable patterns along y = 0
 * (wells hanging below), the clause junctions above y = k5 further right,
 * and the corner vertices w1, w2 on the far left. Every coordinate is an
 * exact rational produced by translations, midpoints and line
 * intersections of previously placed points.
 */

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agl/geometry.hpp"
#include "agl/trilateration.hpp"

namespace agl {

struct Literal {
  std::size_t var = 0;  // 1-based
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;
using Assignment = std::vector<bool>;  // index 0 is variable 1

class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CnfFormula {
  std::size_t n = 0;
  std::vector<Clause> clauses;

  std::size_t m() const { return clauses.size(); }
  // Throws FormulaError on arity, range, repetition or unused variables.
  void validate() const;
  bool evaluate(const Assignment& alpha) const;
  // Occurrence count per variable (index 0 is variable 1).
  std::vector<std::size_t> occurrences() const;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

struct KSequence {
  std::array<mpz_class, 7> k;

  const mpz_class& operator[](std::size_t i) const { return k[i]; }
  bool valid() const;
  // (1, 2, 4, 8s, 32s - 1, 32s, 48s)
  static KSequence scaled(const mpz_class& s);

  friend bool operator==(const KSequence&, const KSequence&) = default;
};

/// Smallest scale whose shallowest clause-to-well sightline keeps slope
/// about 1/8; assemble_polygon doubles it further if a construction check
/// fails.
KSequence choose_k_sequence(std::size_t m, std::size_t n);

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Anchor {
  Point p;
  std::optional<std::size_t> vertex;  // ring index when this is a vertex
  bool derived = false;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

/**
 * Names for every gadget point.
 *
 * Clause j: "C<j>.v1".."C<j>.v5", literal slots "C<j>.l<q>.{a,b,c,d,e,x}",
 * the extra pentagon "C<j>.p.{a,b,c,d,e}", plus "C<j>.x'", "C<j>.x''",
 * "C<j>.z" and "C<j>.h". Variable i: "U<i>.f1".."U<i>.f10", "U<i>.x1",
 * "U<i>.x2", "U<i>.F.f'", "U<i>.F.f''" (and T). Spikes:
 * "U<i>.F.s<k>.{1,2,3,4}". Globals "w1", "w2", "w4"; "w3" and "w5" are
 * aliases of "U1.f1" and "C<m>.v1".
 */
class GadgetIndex {
 public:
  void add_vertex(const std::string& name, std::size_t index, const Point& p);
  void add_derived(const std::string& name, const Point& p);
  void add_alias(const std::string& alias, const std::string& target);

  bool contains(const std::string& name) const;
  const Anchor& at(const std::string& name) const;
  const Point& point(const std::string& name) const { return at(name).p; }

  const std::map<std::string, Anchor>& anchors() const { return anchors_; }
  const std::map<std::string, std::string>& aliases() const { return aliases_; }

  friend bool operator==(const GadgetIndex&, const GadgetIndex&) = default;

 private:
  std::map<std::string, Anchor> anchors_;
  std::map<std::string, std::string> aliases_;
};

enum class Well { F, T };

struct SpikeInfo {
  std::size_t var = 0;  // 1-based
  Well well = Well::F;
  std::size_t clause = 0;  // 1-based
  std::size_t slot = 0;    // 1..3
  bool through_a = true;   // anchor is the a-vertex (else the point x)
  std::size_t rank = 0;    // designated point index, 1-based
  Point designated;
  Line L{Point(0, 0), Point(1, 0)};
  Line L_star{Point(0, 0), Point(1, 0)};
  std::string name;  // "U<i>.F.s<k>"

  friend bool operator==(const SpikeInfo&, const SpikeInfo&) = default;
};

// An intersection-derived point and the four points defining its lines.
struct Derivation {
  std::string name;
  std::array<Point, 4> from;

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

struct ReductionOutput {
  CnfFormula formula;
  SimplePolygon polygon;
  GadgetIndex index;
  KSequence params;
  std::size_t K = 0;
  std::size_t vertex_count = 0;
  std::vector<SpikeInfo> spikes;
  std::vector<Derivation> derivations;
};

struct Certificate {
  Assignment assignment;
  TowerSet towers;
};

/// Literal pentagon in its local frame, mouth e-a on the x-axis.
struct LiteralTemplate {
  Point a, b, c, d, e, x;
};
const LiteralTemplate& literal_template();

/**
 * Places the literal pentagon whose mouth runs from `e` to `a` along the
 * clause top line; the pentagon lies on the left of e->a.
 */
LiteralTemplate build_literal(const Point& e, const Point& a);

/// Clause junction with every vertex except v5 placed (v5 is left at v4').
struct ClauseJunction {
  Point v1, v2, v3, v4, v5;
  std::array<LiteralTemplate, 4> pentagons;  // slots 1..3, then P'
  Point x1;                                  // x'
  std::vector<Point> ring() const;           // 25 vertices, ring order
  Point x2() const;                          // x'', needs v5
};

// Template clause whose v4 sits at `v4`; `H` is the height of v4 over the base.
ClauseJunction build_clause_junction(const Point& v4, const Rational& H);

/// Standalone gadgets for exhaustive search.
struct Gadget {
  SimplePolygon polygon;
  GadgetIndex index;
};
Gadget literal_gadget();
Gadget clause_gadget();

ReductionOutput assemble_polygon(const CnfFormula& phi);
// Builds with a fixed scale; throws ConstructionError instead of retrying.
ReductionOutput assemble_polygon(const CnfFormula& phi, const KSequence& k);

/// Throws FormulaError if alpha does not satisfy the formula.
Certificate certificate_towers(const ReductionOutput& out, const Assignment& alpha);

// Exhaustive search for a satisfying assignment (desk scale only).
std::optional<Assignment> solve_assignment(const CnfFormula& phi);

std::string clause_name(std::size_t j);
std::string var_name(std::size_t i);
std::string well_name(Well w);

}  // namespace agl
