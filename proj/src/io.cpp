#include "agl/io.hpp"

#include <charconv>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace agl {

using nlohmann::json;

// ---------------------------------------------------------------------------
// DIMACS

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

long parse_int(const std::string& tok, std::size_t line_no) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": not an integer: " + tok);
  return v;
}

}  // namespace

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  long n = 0, m = 0;
  CnfFormula phi;
  std::vector<long> cur;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = tokens(line);
    if (tok.empty() || tok[0][0] == 'c') continue;
    if (tok[0] == "%") break;
    if (tok[0] == "p") {
      if (header) throw ParseError("line " + std::to_string(line_no) + ": second header");
      if (tok.size() != 4 || tok[1] != "cnf")
        throw ParseError("line " + std::to_string(line_no) + ": malformed header");
      n = parse_int(tok[2], line_no);
      m = parse_int(tok[3], line_no);
      if (n < 1 || m < 1)
        throw ParseError("line " + std::to_string(line_no) + ": header counts must be positive");
      header = true;
      phi.n = static_cast<std::size_t>(n);
      continue;
    }
    if (!header) throw ParseError("line " + std::to_string(line_no) + ": clause before header");
    for (const auto& t : tok) {
      const long v = parse_int(t, line_no);
      if (v != 0) {
        if (v < -n || v > n)
          throw ParseError("line " + std::to_string(line_no) + ": variable out of range: " + t);
        cur.push_back(v);
        continue;
      }
      if (cur.size() != 3)
        throw ParseError("line " + std::to_string(line_no) + ": clause has " +
                         std::to_string(cur.size()) + " literals, expected 3");
      Clause c;
      for (std::size_t q = 0; q < 3; ++q)
        c[q] = Literal{static_cast<std::size_t>(std::labs(cur[q])), cur[q] > 0};
      phi.clauses.push_back(c);
      cur.clear();
    }
  }
  if (!header) throw ParseError("missing 'p cnf' header");
  if (!cur.empty()) throw ParseError("unterminated clause at end of input");
  if (phi.clauses.size() != static_cast<std::size_t>(m))
    throw ParseError("header declares " + std::to_string(m) + " clauses, found " +
                     std::to_string(phi.clauses.size()));
  try {
    phi.validate();
  } catch (const FormulaError& e) {
    throw ParseError(e.what());
  }
  return phi;
}

std::string to_dimacs(const CnfFormula& phi) {
  std::ostringstream os;
  os << "p cnf " << phi.n << " " << phi.m() << "\n";
  for (const auto& c : phi.clauses) {
    for (const auto& l : c) os << (l.positive ? "" : "-") << l.var << " ";
    os << "0\n";
  }
  return os.str();
}

std::string formula_hash(const CnfFormula& phi) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_dimacs(phi)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Documents

PolygonDocument to_document(const ReductionOutput& out) {
  return {kPolygonVersion, out.formula,      out.polygon.vertices(), out.index,
          out.params,      out.K,            out.spikes,             out.derivations,
          formula_hash(out.formula)};
}

ReductionOutput to_reduction(const PolygonDocument& doc) {
  try {
    ReductionOutput out{doc.formula,   SimplePolygon(doc.vertices), doc.index, doc.params,
                        doc.K,         doc.vertices.size(),         doc.spikes,
                        doc.derivations};
    return out;
  } catch (const GeometryError& e) {
    throw ParseError(std::string("polygon document: ") + e.what());
  }
}

CertificateDocument to_document(const Certificate& cert, const CnfFormula& phi) {
  return {kCertificateVersion, cert.assignment, cert.towers.towers(), formula_hash(phi)};
}

Certificate to_certificate(const CertificateDocument& doc) {
  try {
    return {doc.assignment, TowerSet(doc.towers)};
  } catch (const GeometryError& e) {
    throw ParseError(std::string("certificate document: ") + e.what());
  }
}

namespace {

json rational_json(const Rational& r) {
  return json::array({r.get_num().get_str(), r.get_den().get_str()});
}

json point_json(const Point& p) { return json::array({rational_json(p.x), rational_json(p.y)}); }

json line_json(const Line& l) { return json::array({point_json(l.p), point_json(l.q)}); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field ") + key);
  return j.at(key);
}

mpz_class integer_from(const json& j) {
  if (!j.is_string()) throw ParseError("integer must be a decimal string");
  mpz_class z;
  const std::string s = j.get<std::string>();
  if (s.empty() || z.set_str(s, 10) != 0) throw ParseError("bad integer: " + s);
  return z;
}

Rational rational_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("rational must be [num, den]");
  const mpz_class num = integer_from(j[0]);
  const mpz_class den = integer_from(j[1]);
  if (den == 0) throw ParseError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("point must be [x, y]");
  return {rational_from(j[0]), rational_from(j[1])};
}

Line line_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("line must be [p, q]");
  try {
    return Line(point_from(j[0]), point_from(j[1]));
  } catch (const GeometryError& e) {
    throw ParseError(e.what());
  }
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field ") + key + ": " + e.what());
  }
}

std::string bits(const Assignment& a) {
  std::string s;
  for (bool b : a) s += b ? '1' : '0';
  return s;
}

Assignment bits_from(const std::string& s) {
  Assignment a;
  for (char c : s) {
    if (c != '0' && c != '1') throw ParseError("assignment must be a string of 0/1");
    a.push_back(c == '1');
  }
  return a;
}

json counts_json(const OutcomeCounts& c) {
  return {{"total", c.total},
          {"unique", c.unique},
          {"wrong_point", c.wrong_point},
          {"ambiguous", c.ambiguous},
          {"underdetermined", c.underdetermined},
          {"inconsistent", c.inconsistent}};
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

json to_json(const PolygonDocument& doc) {
  json clauses = json::array();
  for (const auto& c : doc.formula.clauses) {
    json cl = json::array();
    for (const auto& l : c) cl.push_back((l.positive ? 1 : -1) * static_cast<long>(l.var));
    clauses.push_back(cl);
  }
  json params = json::array();
  for (const auto& k : doc.params.k) params.push_back(k.get_str());
  json vertices = json::array();
  for (const auto& v : doc.vertices) vertices.push_back(point_json(v));
  json labels = json::object();
  for (const auto& [name, a] : doc.index.anchors()) {
    json e = {{"point", point_json(a.p)}, {"derived", a.derived}};
    if (a.vertex) e["vertex"] = *a.vertex;
    labels[name] = e;
  }
  json aliases = json::object();
  for (const auto& [alias, target] : doc.index.aliases()) aliases[alias] = target;
  json spikes = json::array();
  for (const auto& s : doc.spikes)
    spikes.push_back({{"name", s.name},
                      {"var", s.var},
                      {"well", well_name(s.well)},
                      {"clause", s.clause},
                      {"slot", s.slot},
                      {"through_a", s.through_a},
                      {"rank", s.rank},
                      {"designated", point_json(s.designated)},
                      {"L", line_json(s.L)},
                      {"L_star", line_json(s.L_star)}});
  json derivs = json::array();
  for (const auto& d : doc.derivations) {
    json from = json::array();
    for (const auto& p : d.from) from.push_back(point_json(p));
    derivs.push_back({{"name", d.name}, {"from", from}});
  }
  return {{"version", doc.version},
          {"formula", {{"n", doc.formula.n}, {"clauses", clauses}}},
          {"hash", doc.hash},
          {"params", params},
          {"K", doc.K},
          {"vertices", vertices},
          {"labels", labels},
          {"aliases", aliases},
          {"spikes", spikes},
          {"derivations", derivs}};
}

PolygonDocument polygon_from_json(const json& j) {
  PolygonDocument doc;
  doc.version = get<std::string>(j, "version");
  if (doc.version != kPolygonVersion) throw ParseError("unsupported version " + doc.version);
  const json& f = field(j, "formula");
  doc.formula.n = get<std::size_t>(f, "n");
  for (const auto& cl : field(f, "clauses")) {
    if (!cl.is_array() || cl.size() != 3) throw ParseError("clause must have 3 literals");
    Clause c;
    for (std::size_t q = 0; q < 3; ++q) {
      if (!cl[q].is_number_integer()) throw ParseError("literal must be an integer");
      const long v = cl[q].get<long>();
      c[q] = Literal{static_cast<std::size_t>(std::labs(v)), v > 0};
    }
    doc.formula.clauses.push_back(c);
  }
  try {
    doc.formula.validate();
  } catch (const FormulaError& e) {
    throw ParseError(e.what());
  }
  doc.hash = get<std::string>(j, "hash");
  const json& params = field(j, "params");
  if (!params.is_array() || params.size() != 7) throw ParseError("params must hold 7 integers");
  for (std::size_t i = 0; i < 7; ++i) doc.params.k[i] = integer_from(params[i]);
  doc.K = get<std::size_t>(j, "K");
  for (const auto& v : field(j, "vertices")) doc.vertices.push_back(point_from(v));
  try {
    for (const auto& [name, e] : field(j, "labels").items()) {
      const Point p = point_from(field(e, "point"));
      if (e.contains("vertex")) {
        const auto idx = get<std::size_t>(e, "vertex");
        if (idx >= doc.vertices.size()) throw ParseError("label " + name + " past the ring");
        doc.index.add_vertex(name, idx, p);
      } else {
        doc.index.add_derived(name, p);
      }
    }
    for (const auto& [alias, target] : field(j, "aliases").items()) {
      if (!target.is_string()) throw ParseError("alias target must be a string");
      doc.index.add_alias(alias, target.get<std::string>());
    }
  } catch (const ConstructionError& e) {
    throw ParseError(e.what());
  }
  for (const auto& s : field(j, "spikes")) {
    SpikeInfo info;
    info.name = get<std::string>(s, "name");
    info.var = get<std::size_t>(s, "var");
    const std::string w = get<std::string>(s, "well");
    if (w != "F" && w != "T") throw ParseError("well must be F or T");
    info.well = w == "F" ? Well::F : Well::T;
    info.clause = get<std::size_t>(s, "clause");
    info.slot = get<std::size_t>(s, "slot");
    info.through_a = get<bool>(s, "through_a");
    info.rank = get<std::size_t>(s, "rank");
    info.designated = point_from(field(s, "designated"));
    info.L = line_from(field(s, "L"));
    info.L_star = line_from(field(s, "L_star"));
    doc.spikes.push_back(std::move(info));
  }
  for (const auto& d : field(j, "derivations")) {
    Derivation der;
    der.name = get<std::string>(d, "name");
    const json& from = field(d, "from");
    if (!from.is_array() || from.size() != 4) throw ParseError("derivation needs 4 points");
    for (std::size_t k = 0; k < 4; ++k) der.from[k] = point_from(from[k]);
    doc.derivations.push_back(std::move(der));
  }
  return doc;
}

json to_json(const CertificateDocument& doc) {
  json towers = json::array();
  for (const auto& t : doc.towers) towers.push_back({{"label", t.label}, {"point", point_json(t.pos)}});
  return {{"version", doc.version},
          {"hash", doc.hash},
          {"assignment", bits(doc.assignment)},
          {"towers", towers}};
}

CertificateDocument certificate_from_json(const json& j) {
  CertificateDocument doc;
  doc.version = get<std::string>(j, "version");
  if (doc.version != kCertificateVersion) throw ParseError("unsupported version " + doc.version);
  doc.hash = get<std::string>(j, "hash");
  doc.assignment = bits_from(get<std::string>(j, "assignment"));
  for (const auto& t : field(j, "towers"))
    doc.towers.push_back({get<std::string>(t, "label"), point_from(field(t, "point"))});
  return doc;
}

json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"witness", c.witness}});
  json out = {{"subject", r.subject},
              {"verdict", r.passed() ? "pass" : "fail"},
              {"checks", checks},
              {"metrics", r.metrics},
              {"notes", r.notes}};
  if (r.stats) {
    out["sample_stats"] = {{"interior", counts_json(r.stats->interior)},
                           {"boundary", counts_json(r.stats->boundary)},
                           {"quotas", r.stats->quotas}};
  }
  json failures = json::array();
  for (const auto& f : r.failures) {
    json cands = json::array();
    for (const auto& c : f.candidates) cands.push_back(point_json(c));
    failures.push_back({{"index", f.index},
                        {"stratum", f.stratum},
                        {"point", point_json(f.p)},
                        {"boundary", f.boundary},
                        {"outcome", outcome_name(f.outcome)},
                        {"candidates", cands}});
  }
  out["failures"] = failures;
  return out;
}

std::string serialize(const PolygonDocument& doc) { return to_json(doc).dump(1) + "\n"; }
std::string serialize(const CertificateDocument& doc) { return to_json(doc).dump(1) + "\n"; }
std::string serialize(const VerificationReport& r) { return to_json(r).dump(2) + "\n"; }

PolygonDocument parse_polygon_document(const std::string& text) {
  return polygon_from_json(parse_text(text));
}

CertificateDocument parse_certificate_document(const std::string& text) {
  return certificate_from_json(parse_text(text));
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << (v == 0 ? 0.0 : v);
  return os.str();
}

}  // namespace

std::string render_svg(const PolygonDocument& doc, const std::optional<CertificateDocument>& cert,
                       const SvgOptions& opt) {
  if (doc.vertices.empty()) return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n";
  double min_x = doc.vertices[0].x.get_d(), max_x = min_x;
  double min_y = doc.vertices[0].y.get_d(), max_y = min_y;
  for (const auto& v : doc.vertices) {
    min_x = std::min(min_x, v.x.get_d());
    max_x = std::max(max_x, v.x.get_d());
    min_y = std::min(min_y, v.y.get_d());
    max_y = std::max(max_y, v.y.get_d());
  }
  const double margin = 10;
  const double span = std::max(max_x - min_x, 1e-9);
  const double scale = (opt.width - 2 * margin) / span;
  const double height = (max_y - min_y) * scale + 2 * margin;
  auto X = [&](const Point& p) { return num((p.x.get_d() - min_x) * scale + margin); };
  auto Y = [&](const Point& p) { return num((max_y - p.y.get_d()) * scale + margin); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(opt.width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(opt.width) << " " << num(height) << "\">\n";
  os << "<path class=\"polygon\" fill=\"#eef2fa\" stroke=\"#1a1a1a\" stroke-width=\"0.6\" d=\"";
  for (std::size_t i = 0; i < doc.vertices.size(); ++i)
    os << (i ? " L " : "M ") << X(doc.vertices[i]) << " " << Y(doc.vertices[i]);
  os << " Z\"/>\n";
  if (opt.labels)
    for (const auto& [name, a] : doc.index.anchors())
      os << "<text class=\"label\" x=\"" << X(a.p) << "\" y=\"" << Y(a.p)
         << "\" font-size=\"4\" fill=\"" << (a.derived ? "#666" : "#000") << "\">" << name
         << "</text>\n";
  if (cert)
    for (const auto& t : cert->towers)
      os << "<circle class=\"tower\" cx=\"" << X(t.pos) << "\" cy=\"" << Y(t.pos)
         << "\" r=\"2.5\" fill=\"#d62728\"><title>" << t.label << "</title></circle>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace agl
