#include <algorithm>
#include <set>
#include <sstream>

#include "agl/verifier.hpp"
#include "agl/visibility.hpp"

namespace agl {

const char* const kLowerBoundNote =
    "The universal lower bound (no tower set smaller than K over continuous "
    "placements) is not decidable by this tool; only its finite skeleton is "
    "checked: the structural suite and exhaustive search over candidate sites "
    "of single gadgets.";

bool VerificationReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !stats || stats->interior.failures() == 0;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

const char* const kSlots[] = {"l1", "l2", "l3", "p"};

struct Tally {
  std::vector<std::string> bad;
  std::size_t checked = 0;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (!ok) bad.push_back(what);
  }

  CheckResult result(const std::string& name) const {
    CheckResult r{name, bad.empty(), ""};
    if (bad.empty()) {
      r.witness = std::to_string(checked) + " checked";
      return r;
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < bad.size() && i < 5; ++i) os << (i ? "; " : "") << bad[i];
    if (bad.size() > 5) os << "; +" << bad.size() - 5 << " more";
    r.witness = os.str();
    return r;
  }
};

bool collinear(const std::vector<Point>& pts) {
  for (std::size_t i = 2; i < pts.size(); ++i)
    if (orientation(pts[0], pts[1], pts[i]) != Orientation::Collinear) return false;
  return true;
}

std::optional<Point> meet(const Point& a, const Point& b, const Point& c, const Point& d) {
  if (a == b || c == d) return std::nullopt;
  auto r = line_intersection(Line(a, b), Line(c, d));
  if (auto* p = std::get_if<Point>(&r)) return *p;
  return std::nullopt;
}

bool on_line(const Line& l, const Point& p) {
  return orientation(l.p, l.q, p) == Orientation::Collinear;
}

bool parallel(const Line& a, const Line& b) {
  return cross(a.q - a.p, b.q - b.p) == 0;
}

// Long parallelogram covering the strip between two parallel lines
// throughout the box.
Kernel strip_region(const Line& L, const Line& Ls, const BoundingBox& box) {
  const Point d = L.q - L.p;
  const Point w = Ls.p - L.p;
  auto l1 = [](const Point& v) -> Rational { return abs(v.x) + abs(v.y); };
  const Rational reach = 4 * (box.max_x - box.min_x + box.max_y - box.min_y) +
                         l1(L.p - Point(box.min_x, box.min_y)) + l1(w);
  const Rational t = reach / std::max(abs(d.x), abs(d.y));
  const Point a = L.p - t * d;
  const Point b = L.p + t * d;
  std::vector<Point> quad{a, b, b + w, a + w};
  if (cross(d, w) < 0) quad = {a, a + w, b + w, b};
  return Kernel(std::move(quad));
}

bool strictly_opposite(const Point& a, const Point& b, const Point& c, const Point& d) {
  auto o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  auto o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  return o1 != Orientation::Collinear && o2 != Orientation::Collinear && o1 != o2 &&
         o3 != Orientation::Collinear && o4 != Orientation::Collinear && o3 != o4;
}

bool strictly_inside(const Kernel& k, const Point& p) {
  const auto& v = k.vertices();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (orientation(v[i], v[(i + 1) % v.size()], p) != Orientation::Left) return false;
  return true;
}

// Whether a convex region and the polygon share interior points.
bool interiors_meet(const Kernel& q, const SimplePolygon& poly) {
  if (q.dimension() < 2) return false;
  for (const auto& v : q.vertices())
    if (point_in_polygon(poly, v) == Location::Interior) return true;
  for (const auto& v : poly.vertices())
    if (strictly_inside(q, v)) return true;
  const auto& qv = q.vertices();
  for (std::size_t i = 0; i < qv.size(); ++i)
    for (std::size_t e = 0; e < poly.size(); ++e)
      if (strictly_opposite(qv[i], qv[(i + 1) % qv.size()], poly.vertex(e), poly.next(e)))
        return true;
  return false;
}

class StructureChecker {
 public:
  explicit StructureChecker(const ReductionOutput& out)
      : out_(out), m_(out.formula.m()), n_(out.formula.n) {}

  VerificationReport run();

 private:
  // Current position of a named anchor; vertices are read from the polygon
  // so that edits to the ring are seen by every check.
  Point at(const std::string& name) const {
    std::string key = name;
    if (!out_.index.contains(key)) {
      auto it = out_.index.aliases().find(key);
      if (it != out_.index.aliases().end()) key = it->second;
    }
    const Anchor& a = out_.index.at(key);
    if (a.vertex && *a.vertex < out_.polygon.size()) return out_.polygon.vertex(*a.vertex);
    return a.p;
  }
  const Rational k(std::size_t i) const { return Rational(out_.params[i]); }
  std::string C(std::size_t j) const { return clause_name(j) + "."; }
  std::string U(std::size_t i) const { return var_name(i) + "."; }
  Point apex(std::size_t i, Well w) const { return at(U(i) + (w == Well::F ? "f6" : "f10")); }

  CheckResult counts_vertices() const;
  CheckResult counts_towers() const;
  CheckResult k_sequence() const;
  CheckResult simplicity() const;
  CheckResult index_coverage() const;
  CheckResult literal_collinear() const;
  CheckResult literal_x() const;
  CheckResult literal_kernel() const;
  CheckResult clause_top_line() const;
  CheckResult clause_derived() const;
  CheckResult clause_kernel() const;
  CheckResult clause_placement() const;
  CheckResult variable_coordinates() const;
  CheckResult variable_collinear() const;
  CheckResult well_alignment() const;
  CheckResult global_anchors() const;
  CheckResult well_designated() const;
  CheckResult spike_assignment() const;
  CheckResult spike_lines() const;
  CheckResult strip_disjoint() const;
  CheckResult strip_kernels_disjoint() const;

  const ReductionOutput& out_;
  std::size_t m_, n_;
};

CheckResult StructureChecker::counts_vertices() const {
  Tally t;
  const std::size_t want = 49 * m_ + 10 * n_ + 3;
  t.expect(out_.polygon.size() == want, "polygon has " + std::to_string(out_.polygon.size()) +
                                            " vertices, expected " + std::to_string(want));
  t.expect(out_.vertex_count == want,
           "recorded vertex_count " + std::to_string(out_.vertex_count));
  return t.result("vertex_count");
}

CheckResult StructureChecker::counts_towers() const {
  Tally t;
  const std::size_t want = 8 * m_ + 2 * n_ + 2;
  t.expect(out_.K == want, "K = " + std::to_string(out_.K) + ", expected " + std::to_string(want));
  return t.result("tower_bound");
}

CheckResult StructureChecker::k_sequence() const {
  Tally t;
  t.expect(out_.params.valid(), "k-sequence not increasing or k6 >= 2 k5");
  return t.result("k_sequence");
}

CheckResult StructureChecker::simplicity() const {
  Tally t;
  const auto& v = out_.polygon.vertices();
  t.expect(v.size() >= 3 && is_simple(v), "ring is not simple");
  t.expect(signed_area2(v) > 0, "ring is not counterclockwise");
  return t.result("simple");
}

CheckResult StructureChecker::index_coverage() const {
  Tally t;
  std::vector<std::size_t> hits(out_.polygon.size(), 0);
  for (const auto& [name, a] : out_.index.anchors()) {
    if (!a.vertex) continue;
    if (*a.vertex >= hits.size()) {
      t.expect(false, name + " points past the ring");
      continue;
    }
    ++hits[*a.vertex];
  }
  for (std::size_t i = 0; i < hits.size(); ++i)
    t.expect(hits[i] == 1, "vertex " + std::to_string(i) + " named " +
                               std::to_string(hits[i]) + " times");
  return t.result("index_coverage");
}

CheckResult StructureChecker::literal_collinear() const {
  Tally t;
  for (std::size_t j = 1; j <= m_; ++j)
    for (const char* s : kSlots) {
      const std::string pre = C(j) + s + ".";
      t.expect(collinear({at(pre + "a"), at(pre + "d"), at(pre + "c")}), pre + "{a,d,c}");
    }
  return t.result("literal_collinear");
}

CheckResult StructureChecker::literal_x() const {
  Tally t;
  for (std::size_t j = 1; j <= m_; ++j)
    for (const char* s : kSlots) {
      const std::string pre = C(j) + s + ".";
      auto x = meet(at(pre + "e"), at(pre + "d"), at(pre + "c"), at(pre + "b"));
      t.expect(x && *x == at(pre + "x") && on_segment(*x, at(pre + "c"), at(pre + "b")),
               pre + "x");
    }
  return t.result("literal_x");
}

CheckResult StructureChecker::literal_kernel() const {
  Tally t;
  for (std::size_t j = 1; j <= m_; ++j)
    for (const char* s : kSlots) {
      const std::string pre = C(j) + s + ".";
      const Point a = at(pre + "a"), b = at(pre + "b"), x = at(pre + "x");
      std::vector<Point> ring{a, b, at(pre + "c"), at(pre + "d"), at(pre + "e")};
      if (!is_simple(ring) || signed_area2(ring) <= 0) {
        t.expect(false, pre + " pentagon not simple");
        continue;
      }
      const Kernel ker = kernel(SimplePolygon::trusted(ring));
      const Rational r(1, 64);
      t.expect(ker.dimension() == 2 && ker.contains(a) && ker.contains(lerp(a, b, r)) &&
                   ker.contains(x) && ker.contains(lerp(x, b, r)),
               pre + " kernel misses a tower locus");
    }
  return t.result("literal_kernel");
}

CheckResult StructureChecker::clause_top_line() const {
  Tally t;
  for (std::size_t j = 1; j <= m_; ++j) {
    const std::string pre = C(j);
    std::vector<Point> pts{at(pre + "v3"), at(pre + "v4")};
    for (const char* s : kSlots) {
      pts.push_back(at(pre + s + ".a"));
      pts.push_back(at(pre + s + ".e"));
    }
    t.expect(collinear(pts), clause_name(j) + " top line");
  }
  return t.result("clause_top_line");
}

CheckResult StructureChecker::clause_derived() const {
  Tally t;
  for (std::size_t j = 1; j <= m_; ++j) {
    const std::string pre = C(j);
    const Point v3 = at(pre + "v3"), ap = at(pre + "p.a");
    auto x1 = meet(at(pre + "v1"), at(pre + "v2"), v3, ap);
    t.expect(x1 && *x1 == at(pre + "x'") && on_segment(*x1, v3, ap), pre + "x'");
    auto x2 = meet(at(pre + "v2"), v3, at(pre + "v4"), at(pre + "v5"));
    t.expect(x2 && *x2 == at(pre + "x''"), pre + "x''");
  }
  return t.result("clause_derived");
}

CheckResult StructureChecker::clause_kernel() const {
  Tally t;
  for (std::size_t j = 1; j <= m_; ++j) {
    const std::string pre = C(j);
    std::vector<Point> ring{at(pre + "v1"), at(pre + "v2"), at(pre + "v3"), at(pre + "v4"),
                            at(pre + "v5")};
    if (!is_simple(ring) || signed_area2(ring) <= 0) {
      t.expect(false, clause_name(j) + " P* not simple");
      continue;
    }
    auto x1 = meet(ring[0], ring[1], ring[2], at(pre + "p.a"));
    auto x2 = meet(ring[1], ring[2], ring[3], ring[4]);
    if (!x1 || !x2) {
      t.expect(false, clause_name(j) + " x' or x'' undefined");
      continue;
    }
    auto got = kernel(SimplePolygon::trusted(ring)).vertices();
    std::vector<Point> want{ring[1], *x1, ring[3], *x2};
    std::sort(got.begin(), got.end(), lex_less);
    std::sort(want.begin(), want.end(), lex_less);
    t.expect(got == want, clause_name(j) + " kernel(P*) != {v2, x', v4, x''}");
  }
  return t.result("clause_kernel");
}

CheckResult StructureChecker::clause_placement() const {
  Tally t;
  const Point first(2 * k(2) * (4 * Rational(n_) - 1), k(6));
  t.expect(at(C(1) + "v4") == first, "C1.v4 != (2 k2 (4n - 1), k6)");
  const Rational right = at(U(n_) + "f10").x;
  for (std::size_t j = 1; j <= m_; ++j) {
    const std::string pre = C(j);
    const Point v4 = at(pre + "v4");
    t.expect(v4.y == k(6), pre + "v4 off y = k6");
    t.expect(at(pre + "v5").y == k(5), pre + "v5 off y = k5");
    if (j > 1) {
      t.expect(v4.x == 2 * at(C(j - 1) + "v1").x, pre + "v4.x != 2 * previous v1.x");
      auto h = meet(Point(0, 0), at(C(j - 1) + "v1"), Point(0, k(6)), Point(1, k(6)));
      t.expect(h && h->x < v4.x, pre + "v4 not right of h");
    }
    auto z = meet(at(pre + "l1.a"), at(pre + "l1.b"), Point(0, 0), Point(1, 0));
    t.expect(z && z->x >= right, pre + "z left of the last variable");
  }
  return t.result("clause_placement");
}

CheckResult StructureChecker::variable_coordinates() const {
  Tally t;
  const Rational k2 = k(2);
  for (std::size_t i = 1; i <= n_; ++i) {
    const std::string pre = U(i);
    const Rational X = 4 * k2 * Rational(i - 1);
    t.expect(at(pre + "f1") == Point(X, 0), pre + "f1");
    t.expect(at(pre + "f10") == Point(X + 3 * k2, 0), pre + "f10");
    t.expect(at(pre + "f3").y == -k(0), pre + "f3 depth");
    for (const char* s : {"f4", "f5", "f8", "f9"})
      t.expect(at(pre + s).y == -k(3), pre + s + " depth");
  }
  return t.result("variable_coordinates");
}

CheckResult StructureChecker::variable_collinear() const {
  Tally t;
  for (std::size_t i = 1; i <= n_; ++i) {
    const std::string pre = U(i);
    t.expect(collinear({at(pre + "f3"), at(pre + "f6"), at(pre + "f7"), at(pre + "f10")}),
             pre + "{f3,f6,f7,f10}");
  }
  return t.result("variable_collinear");
}

CheckResult StructureChecker::well_alignment() const {
  Tally t;
  const Point w1 = at("w1"), w2 = at("w2");
  for (std::size_t i = 1; i <= n_; ++i) {
    const std::string pre = U(i);
    t.expect(collinear({w2, at(pre + "f1"), at(pre + "f3"), at(pre + "f4")}),
             pre + "F left wall misses w2");
    t.expect(collinear({w1, at(pre + "f5"), at(pre + "f6")}), pre + "F right wall misses w1");
    t.expect(collinear({w2, at(pre + "f7"), at(pre + "f8")}), pre + "T left wall misses w2");
    t.expect(collinear({w1, at(pre + "f9"), at(pre + "f10")}), pre + "T right wall misses w1");
  }
  return t.result("well_alignment");
}

CheckResult StructureChecker::global_anchors() const {
  Tally t;
  t.expect(at("w1") == Point(k(1), k(5)), "w1 != (k1, k5)");
  t.expect(at("w2") == Point(0, k(4)), "w2 != (0, k4)");
  t.expect(at("w3") == Point(0, 0), "w3 not at the origin");
  t.expect(at("w4") == Point(at(C(m_) + "v1").x, 0), "w4 != (v_m1.x, 0)");
  t.expect(at("w5") == at(C(m_) + "v1"), "w5 != v_m1");
  return t.result("global_anchors");
}

CheckResult StructureChecker::well_designated() const {
  Tally t;
  const Point w1 = at("w1");
  for (std::size_t i = 1; i <= n_; ++i)
    for (Well w : {Well::F, Well::T}) {
      const std::string pre = U(i) + well_name(w) + ".";
      const Point a = apex(i, w), fp = at(pre + "f'"), fpp = at(pre + "f''");
      t.expect(on_segment(fp, a, w1) && fp != a, pre + "f' off apex-w1");
      t.expect(2 * fpp.x == fp.x + a.x && 2 * fpp.y == fp.y + a.y, pre + "f'' not a midpoint");
      for (const auto& s : out_.spikes)
        if (s.var == i && s.well == w)
          t.expect(on_segment(s.designated, a, fpp) && s.designated != a,
                   s.name + " designated point off apex-f''");
    }
  return t.result("well_designated");
}

CheckResult StructureChecker::spike_assignment() const {
  Tally t;
  std::map<std::tuple<std::size_t, std::size_t, int>, std::size_t> seen;
  std::map<std::pair<std::size_t, int>, std::set<std::size_t>> ranks;
  std::map<std::pair<std::size_t, int>, std::size_t> per_well;
  for (const auto& s : out_.spikes) {
    if (s.clause < 1 || s.clause > m_ || s.slot < 1 || s.slot > 3) {
      t.expect(false, s.name + " bad occurrence");
      continue;
    }
    const Literal& l = out_.formula.clauses[s.clause - 1][s.slot - 1];
    t.expect(l.var == s.var, s.name + " wrong variable");
    t.expect(s.through_a == (l.positive == (s.well == Well::F)), s.name + " wrong anchor");
    ++seen[{s.clause, s.slot, static_cast<int>(s.well)}];
    ranks[{s.var, static_cast<int>(s.well)}].insert(s.rank);
    ++per_well[{s.var, static_cast<int>(s.well)}];
  }
  for (std::size_t j = 1; j <= m_; ++j)
    for (std::size_t q = 1; q <= 3; ++q)
      for (int w = 0; w < 2; ++w)
        t.expect(seen[{j, q, w}] == 1, clause_name(j) + ".l" + std::to_string(q) +
                                           " needs one spike per well");
  for (const auto& [key, count] : per_well) {
    const auto& r = ranks[key];
    t.expect(r.size() == count && *r.begin() == 1 && *r.rbegin() == count && count <= m_,
             var_name(key.first) + " ranks not 1..count");
  }
  std::size_t spike_vertices = 0;
  for (const auto& [name, a] : out_.index.anchors())
    if (a.vertex && name.find(".s") != std::string::npos) ++spike_vertices;
  t.expect(spike_vertices == 24 * m_, "spike vertices " + std::to_string(spike_vertices) +
                                          " != 24m");
  return t.result("spike_assignment");
}

CheckResult StructureChecker::spike_lines() const {
  Tally t;
  for (const auto& s : out_.spikes) {
    const std::string lit = C(s.clause) + "l" + std::to_string(s.slot) + ".";
    const Point anchor = at(lit + (s.through_a ? "a" : "x"));
    const Point a = apex(s.var, s.well);
    const Point& through_L = s.through_a ? a : s.designated;
    const Point& through_Ls = s.through_a ? s.designated : a;
    t.expect(on_line(s.L, anchor) && on_line(s.L, through_L), s.name + " L misses its anchors");
    t.expect(parallel(s.L, s.L_star) && on_line(s.L_star, through_Ls),
             s.name + " L* misplaced");
    const Point q1 = at(s.name + ".1"), q2 = at(s.name + ".2");
    const Point q3 = at(s.name + ".3"), q4 = at(s.name + ".4");
    const bool upper_L = on_line(s.L, q1) && on_line(s.L, q2);
    const bool upper_Ls = on_line(s.L_star, q1) && on_line(s.L_star, q2);
    const bool lower_L = on_line(s.L, q3) && on_line(s.L, q4);
    const bool lower_Ls = on_line(s.L_star, q3) && on_line(s.L_star, q4);
    t.expect((upper_L && lower_Ls) || (upper_Ls && lower_L), s.name + " sides off its strip");
  }
  return t.result("spike_lines");
}

CheckResult StructureChecker::strip_disjoint() const {
  Tally t;
  auto quad = [&](const SpikeInfo& s) {
    std::vector<Point> q;
    for (int c = 1; c <= 4; ++c) q.push_back(at(s.name + "." + std::to_string(c)));
    if (signed_area2(q) < 0) std::reverse(q.begin(), q.end());
    return Kernel(std::move(q));
  };
  for (std::size_t a = 0; a < out_.spikes.size(); ++a)
    for (std::size_t b = a + 1; b < out_.spikes.size(); ++b) {
      const auto& s = out_.spikes[a];
      const auto& u = out_.spikes[b];
      if (s.var != u.var || s.well != u.well) continue;
      t.expect(intersect(quad(s), quad(u)).empty(), s.name + " meets " + u.name);
    }
  return t.result("strip_disjoint");
}

CheckResult StructureChecker::strip_kernels_disjoint() const {
  Tally t;
  const BoundingBox& box = out_.polygon.box();
  for (std::size_t i = 1; i <= n_; ++i) {
    const Point f1 = at(U(i) + "f1"), f10 = at(U(i) + "f10");
    Kernel region({Point(f1.x, -k(3)), Point(f10.x, -k(3)), Point(f10.x, 0), Point(f1.x, 0)});
    for (const auto& s : out_.spikes)
      if (s.var == i) region = intersect(region, strip_region(s.L, s.L_star, box));
    t.expect(!interiors_meet(region, out_.polygon), U(i) + " V(S^F) meets V(S^T)");
  }
  return t.result("strip_kernels_disjoint");
}

VerificationReport StructureChecker::run() {
  VerificationReport r;
  r.subject = "structure";
  using Fn = CheckResult (StructureChecker::*)() const;
  const Fn all[] = {
      &StructureChecker::counts_vertices,      &StructureChecker::counts_towers,
      &StructureChecker::k_sequence,           &StructureChecker::simplicity,
      &StructureChecker::index_coverage,       &StructureChecker::literal_collinear,
      &StructureChecker::literal_x,            &StructureChecker::literal_kernel,
      &StructureChecker::clause_top_line,      &StructureChecker::clause_derived,
      &StructureChecker::clause_kernel,        &StructureChecker::clause_placement,
      &StructureChecker::variable_coordinates, &StructureChecker::variable_collinear,
      &StructureChecker::well_alignment,       &StructureChecker::global_anchors,
      &StructureChecker::well_designated,      &StructureChecker::spike_assignment,
      &StructureChecker::spike_lines,          &StructureChecker::strip_disjoint,
      &StructureChecker::strip_kernels_disjoint,
  };
  for (Fn f : all) {
    try {
      r.checks.push_back((this->*f)());
    } catch (const std::exception& e) {
      r.checks.push_back({"error", false, e.what()});
    }
  }
  r.metrics["vertices"] = std::to_string(out_.polygon.size());
  r.metrics["K"] = std::to_string(out_.K);
  r.notes.push_back(kLowerBoundNote);
  return r;
}

}  // namespace

VerificationReport verify_structure(const ReductionOutput& out) {
  return StructureChecker(out).run();
}

}  // namespace agl
