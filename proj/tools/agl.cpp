// Command-line front end: reduce, certify, verify, solve-small, render, audit.
//
// Exit status: 0 when everything passes, 1 when a verification or
// certification step fails, 2 on usage or input errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "agl/io.hpp"
#include "agl/verifier.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::size_t default_samples() {
  if (const char* env = std::getenv("AGL_SAMPLES")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw UsageError("AGL_SAMPLES must be a positive integer");
  }
  return 10000;
}

agl::ReductionOutput load_polygon(const std::string& path) {
  return agl::to_reduction(agl::parse_polygon_document(read_file(path)));
}

agl::Certificate load_certificate(const std::string& path, const agl::ReductionOutput& out) {
  const auto doc = agl::parse_certificate_document(read_file(path));
  if (doc.hash != agl::formula_hash(out.formula))
    throw UsageError("certificate belongs to a different formula");
  if (doc.assignment.size() != out.formula.n)
    throw UsageError("assignment length differs from the formula");
  return agl::to_certificate(doc);
}

int report(const agl::VerificationReport& r, const std::string& json_path) {
  std::cout << agl::report_to_text(r);
  if (!json_path.empty()) write_file(json_path, agl::serialize(r));
  return r.passed() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Art gallery localization: 3SAT reduction, certificates and verification"};
  app.require_subcommand(1);

  std::string cnf_path, poly_path, cert_path, out_path, report_path, assignment;
  std::size_t samples = 0, max_towers = 2, grid = 16;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  bool labels = false;

  auto* reduce = app.add_subcommand("reduce", "Compile a DIMACS 3CNF file into a polygon");
  reduce->add_option("cnf", cnf_path, "DIMACS cnf file")->required();
  reduce->add_option("-o,--output", out_path, "polygon JSON")->required();

  auto* certify = app.add_subcommand("certify", "Place the K towers for an assignment");
  certify->add_option("polygon", poly_path, "polygon JSON")->required();
  certify->add_option("--assignment", assignment, "bit string u1..un, or 'solve'")->required();
  certify->add_option("-o,--output", out_path, "certificate JSON")->required();

  auto* verify = app.add_subcommand("verify", "Check a certificate by exact sampling");
  verify->add_option("polygon", poly_path, "polygon JSON")->required();
  verify->add_option("certificate", cert_path, "certificate JSON")->required();
  verify->add_option("--samples", samples, "sample budget (default $AGL_SAMPLES or 10000)");
  verify->add_option("--seed", seed, "sampling seed");
  verify->add_option("--threads", threads, "worker threads");
  verify->add_option("--report", report_path, "write the JSON report here");

  auto* small = app.add_subcommand("solve-small", "Exhaustive minimum tower search");
  small->add_option("polygon", poly_path, "polygon JSON, or 'literal' / 'clause' gadget")
      ->required();
  small->add_option("--max-towers", max_towers, "largest subset size to try");
  small->add_option("--grid", grid, "witness grid divisions per axis");

  auto* render = app.add_subcommand("render", "Draw the polygon and towers as SVG");
  render->add_option("polygon", poly_path, "polygon JSON")->required();
  render->add_option("certificate", cert_path, "certificate JSON");
  render->add_option("-o,--output", out_path, "SVG file")->required();
  render->add_flag("--labels", labels, "label every named anchor");

  auto* audit = app.add_subcommand("audit", "Structural invariants and bit growth");
  audit->add_option("polygon", poly_path, "polygon JSON")->required();
  audit->add_option("--report", report_path, "write the JSON reports here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*reduce) {
      const auto phi = agl::parse_dimacs(read_file(cnf_path));
      const auto out = agl::assemble_polygon(phi);
      write_file(out_path, agl::serialize(agl::to_document(out)));
      std::cout << "vertices " << out.polygon.size() << ", K " << out.K << "\n";
      return kOk;
    }
    if (*certify) {
      const auto out = load_polygon(poly_path);
      agl::Assignment alpha;
      if (assignment == "solve") {
        auto found = agl::solve_assignment(out.formula);
        if (!found) {
          std::cerr << "formula is unsatisfiable; no certificate\n";
          return kFailed;
        }
        alpha = *found;
      } else {
        if (assignment.size() != out.formula.n)
          throw UsageError("assignment needs " + std::to_string(out.formula.n) + " bits");
        for (char c : assignment) {
          if (c != '0' && c != '1') throw UsageError("assignment must be 0/1 bits");
          alpha.push_back(c == '1');
        }
        if (!out.formula.evaluate(alpha)) {
          std::cerr << "assignment " << assignment << " does not satisfy the formula\n";
          return kFailed;
        }
      }
      const auto cert = agl::certificate_towers(out, alpha);
      write_file(out_path, agl::serialize(agl::to_document(cert, out.formula)));
      std::cout << cert.towers.size() << " towers\n";
      return kOk;
    }
    if (*verify) {
      const auto out = load_polygon(poly_path);
      const auto cert = load_certificate(cert_path, out);
      agl::SampleOptions opt;
      opt.budget = samples ? samples : default_samples();
      opt.seed = seed;
      opt.threads = threads;
      return report(agl::verify_certificate(out, cert, opt), report_path);
    }
    if (*small) {
      agl::Gadget g{agl::SimplePolygon::trusted({}), {}};
      if (poly_path == "literal") {
        g = agl::literal_gadget();
      } else if (poly_path == "clause") {
        g = agl::clause_gadget();
      } else {
        auto out = load_polygon(poly_path);
        g = agl::Gadget{out.polygon, out.index};
      }
      const auto sites = agl::candidate_sites(g);
      const auto witnesses = agl::witness_grid(g.polygon, grid);
      std::cout << sites.size() << " candidate sites, " << witnesses.size() << " witnesses\n";
      const auto best = agl::solve_small(g.polygon, sites, witnesses, max_towers);
      if (!best) {
        std::cout << "no tower set of size <= " << max_towers << "\n";
        return kFailed;
      }
      std::cout << best->size() << " towers:";
      for (auto i : *best) std::cout << " " << agl::to_string(sites[i]);
      std::cout << "\n";
      return kOk;
    }
    if (*render) {
      const auto doc = agl::parse_polygon_document(read_file(poly_path));
      std::optional<agl::CertificateDocument> cert;
      if (!cert_path.empty()) cert = agl::parse_certificate_document(read_file(cert_path));
      agl::SvgOptions opt;
      opt.labels = labels;
      write_file(out_path, agl::render_svg(doc, cert, opt));
      return kOk;
    }
    if (*audit) {
      const auto out = load_polygon(poly_path);
      const auto structure = agl::verify_structure(out);
      const auto bits = agl::audit_bit_growth(out);
      std::cout << agl::report_to_text(structure) << agl::report_to_text(bits);
      if (!report_path.empty()) {
        nlohmann::json j = {{"structure", agl::to_json(structure)},
                            {"bit_growth", agl::to_json(bits)}};
        write_file(report_path, j.dump(2) + "\n");
      }
      return structure.passed() && bits.passed() ? kOk : kFailed;
    }
  } catch (const agl::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  } catch (const agl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const agl::FormulaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
