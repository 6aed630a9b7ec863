#include <random>
#include <thread>

#include "agl/verifier.hpp"

namespace agl {

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Unique: return "unique";
    case Outcome::WrongPoint: return "wrong_point";
    case Outcome::Ambiguous: return "ambiguous";
    case Outcome::Underdetermined: return "underdetermined";
    case Outcome::Inconsistent: return "inconsistent";
  }
  return "unknown";
}

Outcome classify(const SimplePolygon& poly, const TowerSet& towers, const Point& p,
                 std::vector<Point>* candidates) {
  try {
    auto res = localize(poly, towers, visible_towers(poly, towers, p));
    if (candidates) *candidates = res.candidates;
    switch (res.status) {
      case LocalizationResult::Status::Unique:
        return res.candidates.front() == p ? Outcome::Unique : Outcome::WrongPoint;
      case LocalizationResult::Status::Ambiguous: return Outcome::Ambiguous;
      case LocalizationResult::Status::Underdetermined: return Outcome::Underdetermined;
    }
  } catch (const InconsistentSignals&) {
  }
  return Outcome::Inconsistent;
}

namespace {

constexpr unsigned kFractionBits = 20;
constexpr std::size_t kMaxRejections = 64;

struct Stratum {
  std::string name;
  std::vector<Point> fan;  // fan-triangulated from fan[0]
  std::size_t quota = 0;
};

struct Sample {
  std::string stratum;
  Point p;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  // Uniform in [1, 2^20 - 1] / 2^20, independent of the standard library's
  // distribution implementations.
  Rational fraction() {
    const std::uint64_t v = rng_() >> (64 - kFractionBits);
    const long num = static_cast<long>(std::max<std::uint64_t>(v, 1));
    Rational r(num, 1L << kFractionBits);
    r.canonicalize();
    return r;
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  Point in_triangle(const Point& a, const Point& b, const Point& c) {
    Rational r = fraction(), s = fraction();
    if (r + s >= 1) {
      r = 1 - r;
      s = 1 - s;
    }
    if (r + s >= 1) s /= 2;
    return a + r * (b - a) + s * (c - a);
  }

 private:
  std::mt19937_64 rng_;
};

bool inside_ring(const std::vector<Point>& ring, const Point& p) {
  // Crossing number, boundary counted inside.
  bool in = false;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % ring.size()];
    if (on_segment(p, a, b)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const Rational x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

std::vector<Stratum> gadget_strata(const ReductionOutput& out) {
  const GadgetIndex& idx = out.index;
  auto P = [&](const std::string& n) { return idx.point(n); };
  std::vector<Stratum> s;
  for (std::size_t j = 1; j <= out.formula.m(); ++j) {
    const std::string pre = clause_name(j) + ".";
    for (const char* slot : {"l1", "l2", "l3", "p"}) {
      const std::string q = pre + slot + ".";
      s.push_back({q + "pentagon", {P(q + "a"), P(q + "b"), P(q + "c"), P(q + "d"), P(q + "e")}});
    }
    s.push_back({pre + "P*", {P(pre + "v2"), P(pre + "v3"), P(pre + "v4"), P(pre + "v5"),
                              P(pre + "v1")}});
  }
  for (std::size_t i = 1; i <= out.formula.n; ++i) {
    const std::string pre = var_name(i) + ".";
    s.push_back({pre + "triangle", {P(pre + "f1"), P(pre + "f2"), P(pre + "f3")}});
    s.push_back({pre + "F.well", {P(pre + "f3"), P(pre + "f4"), P(pre + "f5"), P(pre + "f6")}});
    s.push_back({pre + "T.well", {P(pre + "f7"), P(pre + "f8"), P(pre + "f9"), P(pre + "f10")}});
  }
  for (const auto& sp : out.spikes) {
    std::vector<Point> q;
    for (int c = 1; c <= 4; ++c) q.push_back(P(sp.name + "." + std::to_string(c)));
    s.push_back({sp.name, std::move(q)});
  }
  return s;
}

std::vector<Sample> draw_samples(const ReductionOutput& out, std::size_t budget,
                                 std::uint64_t seed, std::map<std::string, std::size_t>& quotas) {
  const SimplePolygon& poly = out.polygon;
  Sampler rng(seed);
  std::vector<Sample> samples;

  // Anchor witnesses: every vertex and every derived anchor in the polygon.
  for (const auto& [name, a] : out.index.anchors())
    if (contains(poly, a.p)) samples.push_back({"anchor", a.p});
  quotas["anchor"] = samples.size();

  const std::size_t boundary = budget / 10;
  const std::size_t global = budget * 3 / 10;
  auto strata = gadget_strata(out);
  const std::size_t rest = budget - boundary - global;
  for (std::size_t k = 0; k < strata.size(); ++k)
    strata[k].quota = rest / strata.size() + (k < rest % strata.size() ? 1 : 0);

  for (std::size_t k = 0; k < boundary; ++k) {
    const std::size_t e = rng.index(poly.size());
    samples.push_back({"boundary", lerp(poly.vertex(e), poly.next(e), rng.fraction())});
  }
  quotas["boundary"] = boundary;

  const BoundingBox& bb = poly.box();
  std::size_t drawn = 0;
  for (std::size_t k = 0; k < global * kMaxRejections && drawn < global; ++k) {
    Point p(bb.min_x + (bb.max_x - bb.min_x) * rng.fraction(),
            bb.min_y + (bb.max_y - bb.min_y) * rng.fraction());
    if (!contains(poly, p)) continue;
    samples.push_back({"global", std::move(p)});
    ++drawn;
  }
  quotas["global"] = drawn;

  for (const auto& st : strata) {
    drawn = 0;
    const std::size_t tris = st.fan.size() - 2;
    for (std::size_t k = 0; k < st.quota * kMaxRejections && drawn < st.quota; ++k) {
      const std::size_t t = 1 + rng.index(tris);
      Point p = rng.in_triangle(st.fan[0], st.fan[t], st.fan[t + 1]);
      if (!inside_ring(st.fan, p) || !contains(poly, p)) continue;
      samples.push_back({st.name, std::move(p)});
      ++drawn;
    }
    quotas[st.name] = drawn;
  }
  return samples;
}

struct Verdict {
  Outcome outcome = Outcome::Inconsistent;
  bool boundary = false;
  std::vector<Point> candidates;
};

void tally(OutcomeCounts& c, Outcome o) {
  ++c.total;
  switch (o) {
    case Outcome::Unique: ++c.unique; break;
    case Outcome::WrongPoint: ++c.wrong_point; break;
    case Outcome::Ambiguous: ++c.ambiguous; break;
    case Outcome::Underdetermined: ++c.underdetermined; break;
    case Outcome::Inconsistent: ++c.inconsistent; break;
  }
}

}  // namespace

VerificationReport verify_certificate(const ReductionOutput& out, const Certificate& cert,
                                      const SampleOptions& opt) {
  VerificationReport r;
  r.subject = "certificate";
  const SimplePolygon& poly = out.polygon;
  const TowerSet& towers = cert.towers;

  CheckResult count{"tower_count", towers.size() == out.K,
                    std::to_string(towers.size()) + " towers, K = " + std::to_string(out.K)};
  r.checks.push_back(count);
  std::string outside;
  for (const auto& t : towers.towers())
    if (!contains(poly, t.pos)) outside += (outside.empty() ? "" : ", ") + t.label;
  r.checks.push_back({"towers_in_polygon", outside.empty(),
                      outside.empty() ? "all inside" : outside});
  bool corners = false, corner2 = false;
  for (const auto& t : towers.towers()) {
    corners = corners || t.pos == out.index.point("w1");
    corner2 = corner2 || t.pos == out.index.point("w2");
  }
  r.checks.push_back({"corner_towers", corners && corner2,
                      corners && corner2 ? "towers at w1 and w2" : "missing w1 or w2 tower"});
  r.checks.push_back({"assignment_satisfies", out.formula.evaluate(cert.assignment),
                      out.formula.evaluate(cert.assignment) ? "satisfied" : "unsatisfied"});
  if (!outside.empty()) {
    r.notes.push_back(kLowerBoundNote);
    return r;
  }

  SampleStats stats;
  const auto samples = draw_samples(out, opt.budget, opt.seed, stats.quotas);
  std::vector<Verdict> verdicts(samples.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Verdict& v = verdicts[k];
      v.boundary = point_in_polygon(poly, samples[k].p) == Location::Boundary;
      v.outcome = classify(poly, towers, samples[k].p, &v.candidates);
    }
  };
  const unsigned threads = std::max(1u, opt.threads);
  if (threads == 1) {
    work(0, samples.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (samples.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = std::min(samples.size(), t * chunk);
      const std::size_t e = std::min(samples.size(), b + chunk);
      pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Verdict& v = verdicts[k];
    tally(v.boundary ? stats.boundary : stats.interior, v.outcome);
    if (v.outcome == Outcome::Unique || r.failures.size() >= opt.max_reported_failures)
      continue;
    r.failures.push_back(
        {k, samples[k].stratum, samples[k].p, v.boundary, v.outcome, v.candidates});
  }
  r.stats = std::move(stats);
  r.metrics["samples"] = std::to_string(samples.size());
  r.metrics["seed"] = std::to_string(opt.seed);
  r.metrics["budget"] = std::to_string(opt.budget);
  r.notes.push_back(
      "Quotas: anchors are every vertex and derived anchor; 10% of the budget on "
      "boundary edges; 30% uniform over the bounding box; the rest split evenly "
      "over pentagons, P*, f1-f2-f3 triangles, wells and spikes.");
  r.notes.push_back(
      "Boundary samples are counted separately and do not decide the verdict.");
  r.notes.push_back(kLowerBoundNote);
  return r;
}

}  // namespace agl
