#include "agl/reduction.hpp"

#include <algorithm>
#include <set>

namespace agl {

// ---------------------------------------------------------------------------
// Formula

void CnfFormula::validate() const {
  if (n == 0) throw FormulaError("formula has no variables");
  if (clauses.empty()) throw FormulaError("formula has no clauses");
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    const Clause& c = clauses[j];
    for (std::size_t q = 0; q < 3; ++q) {
      if (c[q].var < 1 || c[q].var > n)
        throw FormulaError("clause " + std::to_string(j + 1) +
                           ": variable out of range");
      for (std::size_t r = 0; r < q; ++r)
        if (c[r].var == c[q].var)
          throw FormulaError("clause " + std::to_string(j + 1) +
                             ": repeated variable " + std::to_string(c[q].var));
      used[c[q].var - 1] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!used[i]) throw FormulaError("unused variable " + std::to_string(i + 1));
}

bool CnfFormula::evaluate(const Assignment& alpha) const {
  if (alpha.size() != n) throw FormulaError("assignment length differs from n");
  for (const auto& c : clauses) {
    bool sat = false;
    for (const auto& l : c) sat = sat || (alpha[l.var - 1] == l.positive);
    if (!sat) return false;
  }
  return true;
}

std::vector<std::size_t> CnfFormula::occurrences() const {
  std::vector<std::size_t> occ(n, 0);
  for (const auto& c : clauses)
    for (const auto& l : c) ++occ[l.var - 1];
  return occ;
}

std::optional<Assignment> solve_assignment(const CnfFormula& phi) {
  if (phi.n > 24) throw FormulaError("too many variables for exhaustive search");
  Assignment alpha(phi.n);
  for (unsigned long bits = 0; bits < (1UL << phi.n); ++bits) {
    for (std::size_t i = 0; i < phi.n; ++i) alpha[i] = (bits >> i) & 1UL;
    if (phi.evaluate(alpha)) return alpha;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parameters and names

bool KSequence::valid() const {
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] <= 0) return false;
    if (i > 0 && k[i] <= k[i - 1]) return false;
  }
  return k[6] < 2 * k[5];
}

KSequence KSequence::scaled(const mpz_class& s) {
  return KSequence{{mpz_class(1), mpz_class(2), mpz_class(4), 8 * s,
                    32 * s - 1, 32 * s, 48 * s}};
}

namespace {

const Rational kRho(1, 8);           // step along the clause top line
const Rational kProximity(1, 64);    // second tower of each pair
constexpr long kClauseWidth = 7;      // v1.x - v4.x, an integer
constexpr int kMaxScaleDoublings = 24;
constexpr int kMaxDesignatedHalvings = 40;

Point along_top(const Point& v4, long t) {
  return v4 + Rational(t) * kRho * Point(1, -1);
}

// x-coordinate of v_{m1}; independent of the scale.
Rational last_clause_x(std::size_t m, std::size_t n) {
  Rational v4x = Rational(2 * 4 * (4 * static_cast<long>(n) - 1));
  Rational v1x;
  for (std::size_t j = 1; j <= m; ++j) {
    v1x = v4x + kClauseWidth;
    v4x = 2 * v1x;
  }
  return v1x;
}

}  // namespace

KSequence choose_k_sequence(std::size_t m, std::size_t n) {
  mpz_class s = 1;
  const Rational need = last_clause_x(m, n) / 8;
  while (Rational(32 * s) < need) s *= 2;
  return KSequence::scaled(s);
}

std::string clause_name(std::size_t j) { return "C" + std::to_string(j); }
std::string var_name(std::size_t i) { return "U" + std::to_string(i); }
std::string well_name(Well w) { return w == Well::F ? "F" : "T"; }

// ---------------------------------------------------------------------------
// Gadget index

void GadgetIndex::add_vertex(const std::string& name, std::size_t index,
                             const Point& p) {
  if (!anchors_.emplace(name, Anchor{p, index, false}).second)
    throw ConstructionError("duplicate anchor name " + name);
}

void GadgetIndex::add_derived(const std::string& name, const Point& p) {
  if (!anchors_.emplace(name, Anchor{p, std::nullopt, true}).second)
    throw ConstructionError("duplicate anchor name " + name);
}

void GadgetIndex::add_alias(const std::string& alias, const std::string& target) {
  if (!anchors_.count(target)) throw ConstructionError("alias to unknown " + target);
  aliases_[alias] = target;
}

bool GadgetIndex::contains(const std::string& name) const {
  return anchors_.count(name) || aliases_.count(name);
}

const Anchor& GadgetIndex::at(const std::string& name) const {
  auto al = aliases_.find(name);
  const std::string& key = al == aliases_.end() ? name : al->second;
  auto it = anchors_.find(key);
  if (it == anchors_.end()) throw std::out_of_range("no gadget anchor " + name);
  return it->second;
}

// ---------------------------------------------------------------------------
// Literal pattern

const LiteralTemplate& literal_template() {
  static const LiteralTemplate t = [] {
    LiteralTemplate l;
    l.e = Point(-3, 0);
    l.a = Point(3, 0);
    l.x = Point(Rational(-1, 2), Rational(3, 2));
    l.d = midpoint(l.e, l.x);
    l.c = lerp(l.a, l.d, Rational(8, 5));
    l.b = intersect(Line(l.c, l.x), Line(l.a, l.a + Point(-5, 4)));
    return l;
  }();
  return t;
}

LiteralTemplate build_literal(const Point& e, const Point& a) {
  if (e == a) throw ConstructionError("degenerate literal frame");
  const LiteralTemplate& t = literal_template();
  const Point centre = midpoint(e, a);
  const Point u = Rational(1, 6) * (a - e);
  const Point v{-u.y, u.x};
  auto map = [&](const Point& p) { return centre + p.x * u + p.y * v; };
  return {map(t.a), map(t.b), map(t.c), map(t.d), map(t.e), map(t.x)};
}

// ---------------------------------------------------------------------------
// Clause junction

std::vector<Point> ClauseJunction::ring() const {
  std::vector<Point> r{v1, v2, v3};
  for (std::size_t k = 4; k-- > 0;) {
    const auto& p = pentagons[k];
    r.insert(r.end(), {p.a, p.b, p.c, p.d, p.e});
  }
  r.push_back(v4);
  r.push_back(v5);
  return r;
}

Point ClauseJunction::x2() const { return intersect(Line(v2, v3), Line(v4, v5)); }

ClauseJunction build_clause_junction(const Point& v4, const Rational& H) {
  ClauseJunction c;
  c.v4 = v4;
  for (long k = 0; k < 4; ++k)
    c.pentagons[k] = build_literal(along_top(v4, 2 + 9 * k), along_top(v4, 8 + 9 * k));
  c.x1 = along_top(v4, 37);
  c.v3 = along_top(v4, 45);
  const Rational base = v4.y - H;
  if (!(c.v3.y > base)) throw ConstructionError("clause height too small");
  c.v1 = Point(v4.x + kClauseWidth, base);
  c.v2 = intersect(Line(c.x1, c.v1), Line(c.v3, c.v3 + Point(1, 0)));
  c.v5 = Point(v4.x, base);
  return c;
}

namespace {

void index_clause(GadgetIndex& idx, const std::string& pre, const ClauseJunction& c,
                  std::size_t first_vertex) {
  static const char* const kPent[] = {"a", "b", "c", "d", "e"};
  const auto ring = c.ring();
  std::size_t i = first_vertex;
  idx.add_vertex(pre + "v1", i++, c.v1);
  idx.add_vertex(pre + "v2", i++, c.v2);
  idx.add_vertex(pre + "v3", i++, c.v3);
  for (std::size_t k = 4; k-- > 0;) {
    const std::string slot = k == 3 ? "p." : "l" + std::to_string(k + 1) + ".";
    const auto& p = c.pentagons[k];
    const Point pts[] = {p.a, p.b, p.c, p.d, p.e};
    for (int s = 0; s < 5; ++s) idx.add_vertex(pre + slot + kPent[s], i++, pts[s]);
    idx.add_derived(pre + slot + "x", p.x);
  }
  idx.add_vertex(pre + "v4", i++, c.v4);
  idx.add_vertex(pre + "v5", i++, c.v5);
  idx.add_derived(pre + "x'", c.x1);
  idx.add_derived(pre + "x''", c.x2());
}

}  // namespace

Gadget literal_gadget() {
  const LiteralTemplate& t = literal_template();
  Gadget g{SimplePolygon({t.a, t.b, t.c, t.d, t.e}), {}};
  const Point pts[] = {t.a, t.b, t.c, t.d, t.e};
  const char* const names[] = {"a", "b", "c", "d", "e"};
  for (std::size_t i = 0; i < 5; ++i) g.index.add_vertex(names[i], i, pts[i]);
  g.index.add_derived("x", t.x);
  return g;
}

Gadget clause_gadget() {
  const Rational H = 16;
  ClauseJunction c = build_clause_junction(Point(0, 16), H);
  c.v5 = Point(-16, 0);
  Gadget g{SimplePolygon(c.ring()), {}};
  index_clause(g.index, "", c, 0);
  return g;
}

// ---------------------------------------------------------------------------
// Complete construction

namespace {

Line horizontal(const Rational& y) { return Line(Point(0, y), Point(1, y)); }

// Parameter of p along the directed segment a->b (p assumed on the line).
Rational param_along(const Point& p, const Point& a, const Point& b) {
  const Point d = b - a;
  return dot(p - a, d) / dot(d, d);
}

struct VariableGeo {
  std::array<Point, 11> f;  // f[1]..f[10]
  Point x1;
  Point prev_f9, prev_f10;  // right wall of the pattern on the left
};

struct Occurrence {
  std::size_t clause;  // 1-based
  std::size_t slot;    // 1..3
  Literal lit;
};

// A spike during construction, with its four vertices in ring order.
struct SpikeDraft {
  SpikeInfo info;
  std::array<Point, 4> quad;
  Rational wall_upper, wall_lower;  // parameters along the wall, top = 0
  Rational mid_upper, mid_lower;    // parameters along the midline
  std::array<Derivation, 4> derivs;
};

class Builder {
 public:
  Builder(const CnfFormula& phi, const KSequence& k) : phi_(phi), k_(k) {
    for (std::size_t i = 0; i < 7; ++i) kk_[i] = Rational(k[i]);
    w1_ = Point(kk_[1], kk_[5]);
    w2_ = Point(0, kk_[4]);
  }

  ReductionOutput run();

 private:
  Point meet(const std::string& name, const Point& p1, const Point& p2,
             const Point& p3, const Point& p4) {
    Point r = intersect(Line(p1, p2), Line(p3, p4));
    derivs_.push_back({name, {p1, p2, p3, p4}});
    return r;
  }

  void place_variables();
  void place_clauses();
  void place_spikes();
  void place_well(std::size_t i, Well w);
  std::optional<std::vector<SpikeDraft>> try_well(
      std::size_t i, Well w, const std::vector<Occurrence>& occ,
      const Point& apex, const Point& fpp, const Rational& lambda) const;
  void place_v5();

  const LiteralTemplate& pent(std::size_t j, std::size_t q) const {
    return clauses_[j].pentagons[q - 1];
  }

  const CnfFormula& phi_;
  const KSequence& k_;
  std::array<Rational, 7> kk_;
  Point w1_, w2_;
  std::vector<VariableGeo> vars_;          // 1-based
  std::vector<ClauseJunction> clauses_;    // 1-based
  std::vector<Point> z_, h_;               // per clause, h_[1] unused
  std::vector<Derivation> derivs_;
  // Per (var, well): spikes top-first, f', f''.
  std::map<std::pair<std::size_t, int>, std::vector<SpikeDraft>> wells_;
  std::map<std::pair<std::size_t, int>, std::pair<Point, Point>> fprime_;
};

void Builder::place_variables() {
  const std::size_t n = phi_.n;
  vars_.resize(n + 1);
  const Rational& k0 = kk_[0];
  const Rational& k2 = kk_[2];
  const Rational& k3 = kk_[3];
  const Point bot0(0, -k3), bot1(1, -k3);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::string pre = var_name(i) + ".";
    VariableGeo& g = vars_[i];
    auto& f = g.f;
    const Rational X = 4 * k2 * Rational(static_cast<long>(i) - 1);
    f[1] = Point(X, 0);
    f[10] = Point(X + 3 * k2, 0);
    f[3] = meet(pre + "f3", w2_, f[1], Point(0, -k0), Point(1, -k0));
    f[4] = meet(pre + "f4", w2_, f[1], bot0, bot1);
    const Point r1(X + k2, 0), r2(X + 2 * k2, 0);
    f[6] = meet(pre + "f6", w1_, r1, f[3], f[10]);
    f[5] = meet(pre + "f5", w1_, r1, bot0, bot1);
    f[7] = meet(pre + "f7", w2_, r2, f[3], f[10]);
    f[8] = meet(pre + "f8", w2_, r2, bot0, bot1);
    f[9] = meet(pre + "f9", w1_, f[10], bot0, bot1);
    f[2] = midpoint(f[1], f[3]) - Point(k0, 0);
    g.x1 = meet(pre + "x1", f[1], f[1] + (f[10] - f[3]), f[5], f[6]);
    if (i == 1) {
      g.prev_f10 = Point(-k2, 0);
      g.prev_f9 = intersect(Line(w1_, g.prev_f10), horizontal(-k3));
    } else {
      g.prev_f10 = vars_[i - 1].f[10];
      g.prev_f9 = vars_[i - 1].f[9];
    }
  }
}

void Builder::place_clauses() {
  const std::size_t m = phi_.m();
  const Rational H = kk_[6] - kk_[5];
  clauses_.resize(m + 1);
  z_.resize(m + 1);
  h_.resize(m + 1);
  const Point& fn10 = vars_[phi_.n].f[10];
  Rational v4x = 2 * kk_[2] * Rational(4 * static_cast<long>(phi_.n) - 1);
  for (std::size_t j = 1; j <= m; ++j) {
    const std::string pre = clause_name(j) + ".";
    if (j > 1) {
      h_[j] = meet(pre + "h", Point(0, 0), clauses_[j - 1].v1, Point(0, kk_[6]),
                   Point(1, kk_[6]));
      if (!(v4x > h_[j].x)) throw ConstructionError(pre + "v4 not right of h");
    }
    ClauseJunction c = build_clause_junction(Point(v4x, kk_[6]), H);
    derivs_.push_back({pre + "v2", {c.x1, c.v1, c.v3, c.v3 + Point(1, 0)}});
    for (std::size_t q = 0; q < 4; ++q) {
      const auto& p = c.pentagons[q];
      const std::string slot = q == 3 ? "p" : "l" + std::to_string(q + 1);
      derivs_.push_back({pre + slot + ".x", {p.e, p.d, p.c, p.b}});
    }
    const auto& l1 = c.pentagons[0];
    z_[j] = meet(pre + "z", l1.a, l1.b, Point(0, 0), Point(1, 0));
    if (z_[j].x < fn10.x) throw ConstructionError(pre + "z left of the last f10");
    clauses_[j] = c;
    v4x = 2 * c.v1.x;
  }
}

std::optional<std::vector<SpikeDraft>> Builder::try_well(
    std::size_t i, Well w, const std::vector<Occurrence>& occ, const Point& apex,
    const Point& fpp, const Rational& lambda) const {
  const auto& f = vars_[i].f;
  const VariableGeo& g = vars_[i];
  const bool F = w == Well::F;
  const Point& top = F ? f[3] : f[7];
  const Point& bot = F ? f[4] : f[8];
  const Point m0 = F ? midpoint(g.prev_f10, f[1]) : midpoint(f[6], f[7]);
  const Point m1 = F ? midpoint(g.prev_f9, f[4]) : midpoint(f[5], f[8]);
  const Line wall(top, bot), mid(m0, m1);
  const Rational slots(static_cast<long>(phi_.m()) + 1);

  std::vector<SpikeDraft> out;
  for (std::size_t r = 0; r < occ.size(); ++r) {
    const Occurrence& o = occ[r];
    const LiteralTemplate& p = pent(o.clause, o.slot);
    SpikeDraft s;
    s.info.var = i;
    s.info.well = w;
    s.info.clause = o.clause;
    s.info.slot = o.slot;
    s.info.through_a = F == o.lit.positive;
    s.info.rank = r + 1;
    const Point& anchor = s.info.through_a ? p.a : p.x;
    const Point gpt = apex + (Rational(static_cast<long>(r) + 1) / slots * lambda) * (fpp - apex);
    s.info.designated = gpt;
    if (s.info.through_a) {
      s.info.L = Line(anchor, apex);
      s.info.L_star = Line(gpt, gpt + (anchor - apex));
    } else {
      s.info.L = Line(anchor, gpt);
      s.info.L_star = Line(apex, apex + (gpt - anchor));
    }
    s.info.name = var_name(i) + "." + well_name(w) + ".s" + std::to_string(r + 1);

    // The second literal tower must sit strictly inside the strip.
    auto cut = line_intersection(s.info.L_star, Line(anchor, p.b));
    const Point* cp = std::get_if<Point>(&cut);
    if (!cp) return std::nullopt;
    const Rational mu = param_along(*cp, anchor, p.b);
    if (!(mu > kProximity && mu <= 1)) return std::nullopt;

    const Point hL = intersect(s.info.L, wall), hS = intersect(s.info.L_star, wall);
    const Point mL = intersect(s.info.L, mid), mS = intersect(s.info.L_star, mid);
    const Rational tL = param_along(hL, top, bot), tS = param_along(hS, top, bot);
    if (!(tL > 0 && tL < 1 && tS > 0 && tS < 1)) return std::nullopt;
    const bool l_upper = tL < tS;
    const Line& up = l_upper ? s.info.L : s.info.L_star;
    const Line& lo = l_upper ? s.info.L_star : s.info.L;
    const Point& hu = l_upper ? hL : hS;
    const Point& hl = l_upper ? hS : hL;
    const Point& mu_ = l_upper ? mL : mS;
    const Point& ml = l_upper ? mS : mL;
    s.quad = {hu, mu_, ml, hl};
    s.wall_upper = l_upper ? tL : tS;
    s.wall_lower = l_upper ? tS : tL;
    s.mid_upper = param_along(mu_, m0, m1);
    s.mid_lower = param_along(ml, m0, m1);
    if (!(s.mid_upper < s.mid_lower)) return std::nullopt;
    const std::string nm = s.info.name + ".";
    s.derivs = {Derivation{nm + "1", {up.p, up.q, top, bot}},
                Derivation{nm + "2", {up.p, up.q, m0, m1}},
                Derivation{nm + "3", {lo.p, lo.q, m0, m1}},
                Derivation{nm + "4", {lo.p, lo.q, top, bot}}};
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const SpikeDraft& a, const SpikeDraft& b) {
    return a.wall_upper < b.wall_upper;
  });
  for (std::size_t r = 1; r < out.size(); ++r) {
    if (!(out[r - 1].wall_lower < out[r].wall_upper)) return std::nullopt;
    if (!(out[r - 1].mid_lower < out[r].mid_upper)) return std::nullopt;
  }
  return out;
}

void Builder::place_well(std::size_t i, Well w) {
  const auto& f = vars_[i].f;
  const bool F = w == Well::F;
  const Point& apex = F ? f[6] : f[10];
  const Point& top = F ? f[3] : f[7];
  const Point& bot = F ? f[4] : f[8];
  const std::string pre = var_name(i) + "." + well_name(w) + ".";

  // Arrangement lines, excluding those through the apex.
  std::vector<Line> arrangement;
  for (std::size_t j = 1; j <= phi_.m(); ++j)
    for (std::size_t q = 1; q <= 3; ++q) {
      const Literal& l = phi_.clauses[j - 1][q - 1];
      const auto& vf = vars_[l.var].f;
      const auto& p = pent(j, q);
      arrangement.emplace_back(p.x, l.positive ? vf[10] : vf[6]);
      arrangement.emplace_back(p.a, l.positive ? vf[6] : vf[10]);
    }
  for (std::size_t v = 1; v <= phi_.n; ++v)
    arrangement.emplace_back(vars_[v].f[1], vars_[v].f[2]);

  const Point ray = w1_ - apex;
  std::optional<Rational> best;
  const Line* hit = nullptr;
  for (const Line& l : arrangement) {
    if (orientation(l.p, l.q, apex) == Orientation::Collinear) continue;
    const Point d = l.q - l.p;
    const Rational den = cross(ray, d);
    if (den == 0) continue;
    const Rational t = cross(l.p - apex, d) / den;
    if (t > 0 && t <= 1 && (!best || t < *best)) {
      best = t;
      hit = &l;
    }
  }
  Point fp = w1_;
  if (hit) fp = meet(pre + "f'", apex, w1_, hit->p, hit->q);
  const Point fpp = midpoint(fp, apex);
  fprime_[{i, static_cast<int>(w)}] = {fp, fpp};

  // Occurrences ordered lowest wall hit first; that order fixes the ranks.
  std::vector<std::pair<Rational, Occurrence>> keyed;
  for (std::size_t j = 1; j <= phi_.m(); ++j)
    for (std::size_t q = 1; q <= 3; ++q) {
      const Literal& l = phi_.clauses[j - 1][q - 1];
      if (l.var != i) continue;
      const auto& p = pent(j, q);
      const bool through_a = F == l.positive;
      const Point hitp = intersect(Line(through_a ? p.a : p.x, apex), Line(top, bot));
      keyed.emplace_back(param_along(hitp, top, bot), Occurrence{j, q, l});
    }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Occurrence> occ;
  for (auto& kv : keyed) occ.push_back(kv.second);

  Rational lambda = 1;
  for (int h = 0; h <= kMaxDesignatedHalvings; ++h, lambda /= 2) {
    auto drafts = try_well(i, w, occ, apex, fpp, lambda);
    if (!drafts) continue;
    for (const auto& d : *drafts)
      derivs_.insert(derivs_.end(), d.derivs.begin(), d.derivs.end());
    wells_[{i, static_cast<int>(w)}] = std::move(*drafts);
    return;
  }
  throw ConstructionError("no admissible designated points for " + pre + "spikes");
}

void Builder::place_spikes() {
  for (std::size_t i = 1; i <= phi_.n; ++i) {
    place_well(i, Well::F);
    place_well(i, Well::T);
  }
}

void Builder::place_v5() {
  const Rational& k5 = kk_[5];
  for (std::size_t j = 1; j <= phi_.m(); ++j) {
    ClauseJunction& c = clauses_[j];
    const Rational lower = j == 1 ? w1_.x : clauses_[j - 1].v1.x;
    std::optional<Rational> upper;
    for (const auto& [key, drafts] : wells_)
      for (const auto& d : drafts) {
        if (d.info.clause != j) continue;
        const auto& p = pent(j, d.info.slot);
        const Point& t1 = d.info.through_a ? p.a : p.x;
        const Point t2 = lerp(t1, p.b, kProximity);
        for (const Point* t : {&t1, &t2})
          for (const Point& q : d.quad) {
            const Rational cx = t->x + (q.x - t->x) * (t->y - k5) / (t->y - q.y);
            if (!upper || cx < *upper) upper = cx;
          }
      }
    if (!upper || !(lower < *upper))
      throw ConstructionError(clause_name(j) + ": no room for v5");
    c.v5 = Point((lower + *upper) / 2, k5);
  }
}

ReductionOutput Builder::run() {
  place_variables();
  place_clauses();
  place_spikes();
  place_v5();

  ReductionOutput out{phi_, SimplePolygon::trusted({}), {}, k_, 0, 0, {}, {}};
  std::vector<Point> ring;
  GadgetIndex& idx = out.index;
  auto push = [&](const std::string& name, const Point& p) {
    idx.add_vertex(name, ring.size(), p);
    ring.push_back(p);
  };
  auto push_well = [&](std::size_t i, Well w) {
    for (const auto& d : wells_.at({i, static_cast<int>(w)})) {
      for (int s = 0; s < 4; ++s)
        push(d.info.name + "." + std::to_string(s + 1), d.quad[s]);
      out.spikes.push_back(d.info);
    }
  };
  for (std::size_t i = 1; i <= phi_.n; ++i) {
    const std::string pre = var_name(i) + ".";
    const auto& f = vars_[i].f;
    for (int s = 1; s <= 3; ++s) push(pre + "f" + std::to_string(s), f[s]);
    push_well(i, Well::F);
    for (int s = 4; s <= 7; ++s) push(pre + "f" + std::to_string(s), f[s]);
    push_well(i, Well::T);
    for (int s = 8; s <= 10; ++s) push(pre + "f" + std::to_string(s), f[s]);
    idx.add_derived(pre + "x1", vars_[i].x1);
    idx.add_derived(pre + "x2", f[10]);
    for (Well w : {Well::F, Well::T}) {
      const auto& [fp, fpp] = fprime_.at({i, static_cast<int>(w)});
      idx.add_derived(pre + well_name(w) + ".f'", fp);
      idx.add_derived(pre + well_name(w) + ".f''", fpp);
    }
  }
  const std::size_t m = phi_.m();
  push("w4", Point(clauses_[m].v1.x, 0));
  for (std::size_t j = m; j >= 1; --j) {
    const std::string pre = clause_name(j) + ".";
    const ClauseJunction& c = clauses_[j];
    index_clause(idx, pre, c, ring.size());
    const auto cr = c.ring();
    ring.insert(ring.end(), cr.begin(), cr.end());
    derivs_.push_back({pre + "x''", {c.v2, c.v3, c.v4, c.v5}});
    idx.add_derived(pre + "z", z_[j]);
    if (j > 1) idx.add_derived(pre + "h", h_[j]);
  }
  push("w1", w1_);
  push("w2", w2_);
  idx.add_alias("w3", var_name(1) + ".f1");
  idx.add_alias("w5", clause_name(m) + ".v1");

  out.vertex_count = ring.size();
  try {
    out.polygon = SimplePolygon(std::move(ring));
  } catch (const GeometryError& e) {
    throw ConstructionError(std::string("assembled ring rejected: ") + e.what());
  }
  out.K = 8 * m + 2 * phi_.n + 2;
  out.derivations = std::move(derivs_);
  return out;
}

}  // namespace

ReductionOutput assemble_polygon(const CnfFormula& phi, const KSequence& k) {
  phi.validate();
  if (!k.valid()) throw ConstructionError("invalid k-sequence");
  return Builder(phi, k).run();
}

ReductionOutput assemble_polygon(const CnfFormula& phi) {
  phi.validate();
  KSequence k = choose_k_sequence(phi.m(), phi.n);
  for (int attempt = 0;; ++attempt) {
    try {
      return assemble_polygon(phi, k);
    } catch (const ConstructionError&) {
      if (attempt >= kMaxScaleDoublings) throw;
      k = KSequence::scaled(2 * (k[5] / 32));
    }
  }
}

Certificate certificate_towers(const ReductionOutput& out, const Assignment& alpha) {
  const CnfFormula& phi = out.formula;
  if (!phi.evaluate(alpha)) throw FormulaError("assignment does not satisfy the formula");
  const GadgetIndex& idx = out.index;
  std::vector<Tower> towers;
  auto pair = [&](const std::string& pre, const Point& t1, const Point& toward) {
    towers.push_back({pre + "t1", t1});
    towers.push_back({pre + "t2", lerp(t1, toward, kProximity)});
  };
  for (std::size_t j = 1; j <= phi.m(); ++j) {
    const std::string pre = clause_name(j) + ".";
    for (std::size_t q = 1; q <= 3; ++q) {
      const Literal& l = phi.clauses[j - 1][q - 1];
      const std::string slot = pre + "l" + std::to_string(q) + ".";
      const bool value = alpha[l.var - 1] == l.positive;
      pair(slot, idx.point(slot + (value ? "a" : "x")), idx.point(slot + "b"));
    }
    pair(pre + "p.", idx.point(pre + "p.a"), idx.point(pre + "p.b"));
  }
  for (std::size_t i = 1; i <= phi.n; ++i) {
    const Well w = alpha[i - 1] ? Well::T : Well::F;
    const std::string pre = var_name(i) + "." + well_name(w) + ".";
    const Point& apex = idx.point(var_name(i) + (w == Well::T ? ".f10" : ".f6"));
    const SpikeInfo* first = nullptr;
    for (const auto& s : out.spikes)
      if (s.var == i && s.well == w && s.rank == 1) first = &s;
    if (!first) throw ConstructionError("well without spikes: " + pre);
    pair(pre, apex, first->designated);
  }
  towers.push_back({"w1.t", idx.point("w1")});
  towers.push_back({"w2.t", idx.point("w2")});
  return Certificate{alpha, TowerSet(std::move(towers))};
}

}  // namespace agl
