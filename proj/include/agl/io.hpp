#pragma once
/**
 * DIMACS input, JSON documents and SVG output.
 *
 * Rationals travel as ["numerator", "denominator"] string pairs so that
 * arbitrarily large values round-trip exactly.
 */

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "agl/reduction.hpp"
#include "agl/verifier.hpp"

namespace agl {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strict DIMACS cnf: exactly three distinct variables per clause, every
/// variable used, clause count matching the header.
CnfFormula parse_dimacs(const std::string& text);
std::string to_dimacs(const CnfFormula& phi);

// FNV-1a over the canonical DIMACS text, 16 hex digits.
std::string formula_hash(const CnfFormula& phi);

inline constexpr const char* kPolygonVersion = "agl-polygon/1";
inline constexpr const char* kCertificateVersion = "agl-certificate/1";

struct PolygonDocument {
  std::string version = kPolygonVersion;
  CnfFormula formula;
  std::vector<Point> vertices;
  GadgetIndex index;
  KSequence params;
  std::size_t K = 0;
  std::vector<SpikeInfo> spikes;
  std::vector<Derivation> derivations;
  std::string hash;

  friend bool operator==(const PolygonDocument&, const PolygonDocument&) = default;
};

struct CertificateDocument {
  std::string version = kCertificateVersion;
  Assignment assignment;
  std::vector<Tower> towers;
  std::string hash;  // formula the certificate belongs to

  friend bool operator==(const CertificateDocument&, const CertificateDocument&) = default;
};

PolygonDocument to_document(const ReductionOutput& out);
// Re-validates the ring; throws ParseError if it is not a simple polygon.
ReductionOutput to_reduction(const PolygonDocument& doc);

CertificateDocument to_document(const Certificate& cert, const CnfFormula& phi);
Certificate to_certificate(const CertificateDocument& doc);

nlohmann::json to_json(const PolygonDocument& doc);
nlohmann::json to_json(const CertificateDocument& doc);
nlohmann::json to_json(const VerificationReport& r);

// Throw ParseError on malformed input.
PolygonDocument polygon_from_json(const nlohmann::json& j);
CertificateDocument certificate_from_json(const nlohmann::json& j);

std::string serialize(const PolygonDocument& doc);
std::string serialize(const CertificateDocument& doc);
std::string serialize(const VerificationReport& r);
PolygonDocument parse_polygon_document(const std::string& text);
CertificateDocument parse_certificate_document(const std::string& text);

struct SvgOptions {
  bool labels = false;
  double width = 1200;
};

/// Deterministic SVG; decimals at 6 significant digits, display only.
std::string render_svg(const PolygonDocument& doc,
                       const std::optional<CertificateDocument>& cert = std::nullopt,
                       const SvgOptions& opt = {});

}  // namespace agl
