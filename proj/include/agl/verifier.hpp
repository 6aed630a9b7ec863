#pragma once
/**
 * Machine checks for the reduction: structural invariants, certificate
 * sampling, a brute-force tower search for small gadgets and the
 * coordinate bit-growth audit.
 *
 * Every check is exact. Failures are recorded in the report, never thrown.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agl/reduction.hpp"

namespace agl {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string witness;  // offending items, or a short summary on success

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

enum class Outcome { Unique, WrongPoint, Ambiguous, Underdetermined, Inconsistent };
std::string outcome_name(Outcome o);

struct SampleFailure {
  std::size_t index = 0;
  std::string stratum;
  Point p;
  bool boundary = false;
  Outcome outcome = Outcome::Inconsistent;
  std::vector<Point> candidates;

  friend bool operator==(const SampleFailure&, const SampleFailure&) = default;
};

struct OutcomeCounts {
  std::size_t total = 0;
  std::size_t unique = 0;
  std::size_t wrong_point = 0;
  std::size_t ambiguous = 0;
  std::size_t underdetermined = 0;
  std::size_t inconsistent = 0;

  std::size_t failures() const { return total - unique; }
  friend bool operator==(const OutcomeCounts&, const OutcomeCounts&) = default;
};

struct SampleStats {
  OutcomeCounts interior;
  OutcomeCounts boundary;
  std::map<std::string, std::size_t> quotas;  // stratum -> samples drawn

  friend bool operator==(const SampleStats&, const SampleStats&) = default;
};

struct VerificationReport {
  std::string subject;
  std::vector<CheckResult> checks;
  std::optional<SampleStats> stats;
  std::vector<SampleFailure> failures;
  std::map<std::string, std::string> metrics;
  std::vector<std::string> notes;

  // All checks pass and no interior sample fails. Boundary failures are
  // reported separately and do not affect the verdict.
  bool passed() const;
  const CheckResult* find(const std::string& name) const;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Always attached to certificate and structure reports.
extern const char* const kLowerBoundNote;

VerificationReport verify_structure(const ReductionOutput& out);

struct SampleOptions {
  std::size_t budget = 10000;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::size_t max_reported_failures = 50;
};

VerificationReport verify_certificate(const ReductionOutput& out, const Certificate& cert,
                                      const SampleOptions& opt = {});

// Localization outcome for one agent position.
Outcome classify(const SimplePolygon& poly, const TowerSet& towers, const Point& p,
                 std::vector<Point>* candidates = nullptr);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tower sites for exhaustive search: polygon vertices, derived anchors
/// inside the polygon and kernel vertices of the gadget and its pentagon
/// and P* subpolygons. Deduplicated, in discovery order.
std::vector<Point> candidate_sites(const Gadget& g);

/// Lattice points strictly inside the polygon (divisions per axis) plus one
/// point tucked into the corner at every vertex.
std::vector<Point> witness_grid(const SimplePolygon& poly, std::size_t divisions);

/**
 * Smallest subset of `sites` (first in lexicographic index order among
 * subsets of that size) that localizes every witness uniquely, or nullopt
 * if none has at most max_k towers. Throws BudgetExceeded after
 * `node_budget` search nodes.
 */
std::optional<std::vector<std::size_t>> solve_small(const SimplePolygon& poly,
                                                    const std::vector<Point>& sites,
                                                    const std::vector<Point>& witnesses,
                                                    std::size_t max_k,
                                                    std::uint64_t node_budget = 1ULL << 32);

VerificationReport audit_bit_growth(const ReductionOutput& out);

std::string report_to_text(const VerificationReport& r);

}  // namespace agl
