#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include "agl/verifier.hpp"
#include "agl/visibility.hpp"

namespace agl {

// ---------------------------------------------------------------------------
// Exhaustive search

std::vector<Point> candidate_sites(const Gadget& g) {
  std::vector<Point> out;
  auto add = [&](const Point& p) {
    if (!contains(g.polygon, p)) return;
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  auto add_kernel = [&](std::vector<Point> ring) {
    if (!is_simple(ring) || signed_area2(ring) <= 0) return;
    const Kernel ker = kernel(SimplePolygon::trusted(std::move(ring)));
    for (const auto& v : ker.vertices()) add(v);
  };
  for (const auto& v : g.polygon.vertices()) add(v);
  for (const auto& [name, a] : g.index.anchors())
    if (!a.vertex) add(a.p);
  add_kernel(g.polygon.vertices());

  const auto& idx = g.index;
  for (const auto& [name, a] : idx.anchors()) {
    if (name.empty() || name.back() != 'a') continue;
    const std::string pre = name.substr(0, name.size() - 1);
    if (!pre.empty() && pre.back() != '.') continue;
    bool whole = true;
    for (const char* s : {"b", "c", "d", "e"}) whole = whole && idx.contains(pre + s);
    if (!whole) continue;
    add_kernel({idx.point(pre + "a"), idx.point(pre + "b"), idx.point(pre + "c"),
                idx.point(pre + "d"), idx.point(pre + "e")});
  }
  if (idx.contains("v1") && idx.contains("v5"))
    add_kernel({idx.point("v1"), idx.point("v2"), idx.point("v3"), idx.point("v4"),
                idx.point("v5")});
  return out;
}

std::vector<Point> witness_grid(const SimplePolygon& poly, std::size_t divisions) {
  std::vector<Point> out;
  const BoundingBox& bb = poly.box();
  const Rational n(static_cast<long>(divisions));
  for (std::size_t i = 1; i < divisions; ++i)
    for (std::size_t j = 1; j < divisions; ++j) {
      Point p(bb.min_x + (bb.max_x - bb.min_x) * Rational(static_cast<long>(i)) / n,
              bb.min_y + (bb.max_y - bb.min_y) * Rational(static_cast<long>(j)) / n);
      if (point_in_polygon(poly, p) == Location::Interior) out.push_back(std::move(p));
    }
  const Rational eps(1, 32);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& v = poly.vertex(i);
    Point p = v + eps * (poly.vertex(i + poly.size() - 1) - v) + eps * (poly.next(i) - v);
    if (point_in_polygon(poly, p) == Location::Interior) out.push_back(std::move(p));
  }
  return out;
}

namespace {

using Mask = std::uint64_t;

class SmallSolver {
 public:
  SmallSolver(const SimplePolygon& poly, const std::vector<Point>& sites,
              const std::vector<Point>& witnesses, std::uint64_t budget)
      : poly_(poly), sites_(sites), witnesses_(witnesses), budget_(budget) {
    const std::size_t s = sites.size();
    for (const auto& p : sites)
      if (!contains(poly, p)) throw GeometryError("site outside polygon: " + to_string(p));
    for (const auto& w : witnesses) {
      if (!contains(poly, w)) throw GeometryError("witness outside polygon: " + to_string(w));
      Mask vis = 0;
      int self = -1;
      for (std::size_t k = 0; k < s; ++k) {
        if (sites[k] == w) self = static_cast<int>(k);
        if (sites[k] == w || segment_in_polygon_unchecked(poly, sites[k], w))
          vis |= Mask{1} << k;
      }
      vis_.push_back(vis);
      self_.push_back(self);
    }
    collinear_.assign(s * s * s, -1);
  }

  std::optional<std::vector<std::size_t>> solve(std::size_t max_k) {
    for (std::size_t k = 1; k <= max_k && k <= sites_.size(); ++k) {
      chosen_.clear();
      if (dfs(0, 0, k)) return chosen_;
    }
    return std::nullopt;
  }

  // Exactly what localize would decide, using the precomputed tables.
  bool localizes(std::size_t w, Mask towers) {
    if (self_[w] >= 0 && (towers >> self_[w] & 1)) return true;
    const Mask v = vis_[w] & towers;
    if (std::popcount(v) < 2) return false;
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(v));
    const Mask rest = v & (v - 1);
    const std::size_t j = static_cast<std::size_t>(std::countr_zero(rest));
    for (Mask r = rest & (rest - 1); r; r &= r - 1)
      if (!is_collinear(i, j, static_cast<std::size_t>(std::countr_zero(r)))) return true;
    const auto& [inside, mirror_vis] = mirror(w, i, j);
    return !inside || (mirror_vis & towers) != v;
  }

 private:
  bool is_collinear(std::size_t i, std::size_t j, std::size_t k) {
    const std::size_t s = sites_.size();
    int8_t& c = collinear_[(i * s + j) * s + k];
    if (c < 0)
      c = orientation(sites_[i], sites_[j], sites_[k]) == Orientation::Collinear ? 1 : 0;
    return c == 1;
  }

  // Reflection of witness w across the line of sites i, j: whether it lies
  // in the polygon (and differs from w) and which sites it sees.
  const std::pair<bool, Mask>& mirror(std::size_t w, std::size_t i, std::size_t j) {
    auto key = std::make_tuple(w, i, j);
    auto it = mirrors_.find(key);
    if (it != mirrors_.end()) return it->second;
    std::pair<bool, Mask> val{false, 0};
    const Point c = reflect_across_line(witnesses_[w], Line(sites_[i], sites_[j]));
    if (c != witnesses_[w] && contains(poly_, c)) {
      val.first = true;
      for (std::size_t k = 0; k < sites_.size(); ++k)
        if (sites_[k] == c || segment_in_polygon_unchecked(poly_, sites_[k], c))
          val.second |= Mask{1} << k;
    }
    return mirrors_.emplace(key, val).first->second;
  }

  bool feasible(std::size_t next, Mask towers, std::size_t left) const {
    const Mask later = next >= 64 ? 0 : ~Mask{0} << next;
    for (std::size_t w = 0; w < vis_.size(); ++w) {
      const int self = self_[w];
      if (self >= 0 && (towers >> self & 1)) continue;
      if (self >= static_cast<int>(next) && left > 0) continue;
      const std::size_t have = static_cast<std::size_t>(std::popcount(vis_[w] & towers));
      const std::size_t can = static_cast<std::size_t>(std::popcount(vis_[w] & later));
      if (have + std::min(left, can) < 2) return false;
    }
    return true;
  }

  bool dfs(std::size_t next, Mask towers, std::size_t left) {
    if (++nodes_ > budget_) throw BudgetExceeded("solve_small node budget exhausted");
    if (left == 0) {
      for (std::size_t w = 0; w < vis_.size(); ++w)
        if (!localizes(w, towers)) return false;
      return true;
    }
    if (!feasible(next, towers, left)) return false;
    for (std::size_t k = next; k + left <= sites_.size(); ++k) {
      chosen_.push_back(k);
      if (dfs(k + 1, towers | Mask{1} << k, left - 1)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  const SimplePolygon& poly_;
  const std::vector<Point>& sites_;
  const std::vector<Point>& witnesses_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<Mask> vis_;
  std::vector<int> self_;
  std::vector<int8_t> collinear_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::pair<bool, Mask>> mirrors_;
  std::vector<std::size_t> chosen_;
};

}  // namespace

std::optional<std::vector<std::size_t>> solve_small(const SimplePolygon& poly,
                                                    const std::vector<Point>& sites,
                                                    const std::vector<Point>& witnesses,
                                                    std::size_t max_k,
                                                    std::uint64_t node_budget) {
  if (sites.size() > 64) throw BudgetExceeded("more than 64 candidate sites");
  return SmallSolver(poly, sites, witnesses, node_budget).solve(max_k);
}

// ---------------------------------------------------------------------------
// Bit growth

VerificationReport audit_bit_growth(const ReductionOutput& out) {
  VerificationReport r;
  r.subject = "bit_growth";
  const std::size_t m = out.formula.m();

  std::vector<std::string> bad;
  std::size_t worst_ratio_num = 0, worst_ratio_den = 1;
  for (const auto& d : out.derivations) {
    std::size_t b = 0;
    for (const auto& p : d.from) b = std::max(b, bit_length(p));
    auto hit = line_intersection(Line(d.from[0], d.from[1]), Line(d.from[2], d.from[3]));
    const Point* p = std::get_if<Point>(&hit);
    if (!p) {
      bad.push_back(d.name + " lines do not meet");
      continue;
    }
    const std::size_t got = bit_length(*p);
    if (got * worst_ratio_den > worst_ratio_num * std::max<std::size_t>(b, 1)) {
      worst_ratio_num = got;
      worst_ratio_den = std::max<std::size_t>(b, 1);
    }
    if (got > 5 * b)
      bad.push_back(d.name + ": " + std::to_string(got) + " bits from " + std::to_string(b));
  }
  CheckResult five{"intersection_5b", bad.empty(), ""};
  five.witness = bad.empty() ? std::to_string(out.derivations.size()) + " derivations"
                             : bad.front() + (bad.size() > 1 ? " (+" +
                                                std::to_string(bad.size() - 1) + " more)"
                                                                 : "");
  r.checks.push_back(five);

  auto bits_x = [&](const std::string& name) { return bit_length(out.index.point(name).x); };
  const long first = static_cast<long>(bits_x("C1.v4"));
  const long last = static_cast<long>(bits_x(clause_name(m) + ".v1"));
  const long growth = last - first;
  r.checks.push_back({"clause_chain_2m", growth <= 2 * static_cast<long>(m),
                      "bitlen(v_m1.x) - bitlen(v_14.x) = " + std::to_string(growth) +
                          ", bound " + std::to_string(2 * m)});

  std::string step_bad;
  long max_step = 0;
  for (std::size_t j = 2; j <= m; ++j) {
    const long step = static_cast<long>(bits_x(clause_name(j) + ".v4")) -
                      static_cast<long>(bits_x(clause_name(j - 1) + ".v4"));
    max_step = std::max(max_step, step);
    if (step > 2 && step_bad.empty()) step_bad = clause_name(j) + " grows " + std::to_string(step);
  }
  r.checks.push_back({"clause_step_2", step_bad.empty(),
                      step_bad.empty() ? "max step " + std::to_string(max_step) : step_bad});

  std::size_t max_bits = 0;
  for (const auto& v : out.polygon.vertices()) max_bits = std::max(max_bits, bit_length(v));
  std::size_t max_derived = 0;
  for (const auto& [name, a] : out.index.anchors())
    max_derived = std::max(max_derived, bit_length(a.p));
  r.metrics["max_vertex_bits"] = std::to_string(max_bits);
  r.metrics["max_anchor_bits"] = std::to_string(max_derived);
  r.metrics["clause_chain_growth"] = std::to_string(growth);
  r.metrics["worst_intersection_ratio"] =
      std::to_string(worst_ratio_num) + "/" + std::to_string(worst_ratio_den);
  return r;
}

// ---------------------------------------------------------------------------
// Text rendering

namespace {

void write_counts(std::ostringstream& os, const char* label, const OutcomeCounts& c) {
  os << "  " << label << ": " << c.total << " samples, " << c.unique << " unique, "
     << c.wrong_point << " wrong point, " << c.ambiguous << " ambiguous, " << c.underdetermined
     << " underdetermined, " << c.inconsistent << " inconsistent\n";
}

}  // namespace

std::string report_to_text(const VerificationReport& r) {
  std::ostringstream os;
  os << "report: " << r.subject << "\n";
  os << "verdict: " << (r.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& c : r.checks)
    os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name << ": " << c.witness << "\n";
  if (r.stats) {
    write_counts(os, "interior", r.stats->interior);
    write_counts(os, "boundary", r.stats->boundary);
    os << "  quotas:";
    for (const auto& [name, q] : r.stats->quotas) os << " " << name << "=" << q;
    os << "\n";
  }
  for (const auto& f : r.failures) {
    os << "  failure #" << f.index << " " << f.stratum << (f.boundary ? " (boundary)" : "")
       << " at " << to_string(f.p) << ": " << outcome_name(f.outcome);
    for (const auto& c : f.candidates) os << " " << to_string(c);
    os << "\n";
  }
  for (const auto& [k, v] : r.metrics) os << "  " << k << " = " << v << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace agl
