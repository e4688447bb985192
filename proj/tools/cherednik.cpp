// Command-line driver: invariance checks, restrictions, identity suites and
// the golden-table catalog. Output is JSON with exact numbers.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cherednik/catalog.hpp"
#include "cherednik/complexref.hpp"
#include "cherednik/dunkl.hpp"
#include "cherednik/restrict.hpp"
#include "cherednik/rootsys.hpp"
#include "cherednik/strata.hpp"

using namespace cherednik;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kNegative = 1, kUsage = 2, kInfeasible = 3 };

struct Common {
  std::string out;
  bool pretty = false;
  std::uint64_t seed = 1;
  std::size_t orbit_cap = 0;
};

struct Target {
  std::string family;
  int rank = 0;
  std::string subgraph;
  std::string group;  // "m,p,N"
};

struct Multiplicities {
  std::string c, c1, c2;
  std::vector<std::string> assign;  // label=value
  bool symbolic = false;
  std::string c0, c0_tilde, ct;  // complex groups
};

void add_common(CLI::App* app, Common& o) {
  app->add_option("--out", o.out, "Write the report to this file instead of stdout");
  app->add_flag("--pretty", o.pretty, "Human-readable table instead of JSON");
  app->add_option("--seed", o.seed, "Seed for sampled multiplicities and witnesses")->capture_default_str();
  app->add_option("--orbit-cap", o.orbit_cap, "Orbit enumeration cap (default from CHEREDNIK_ORBIT_CAP)");
}

void add_target(CLI::App* app, Target& t, bool with_subgraph) {
  app->add_option("--family", t.family, "Root system family, e.g. A, B, E8, H3, I2(5)");
  app->add_option("--rank", t.rank, "Rank for a bare A, B or D");
  if (with_subgraph) app->add_option("--subgraph", t.subgraph, "Stratum: type, nodes:.., blocks, Bl:l=, Dp:p=");
  app->add_option("--group", t.group, "Complex reflection group G(m,p,N) as m,p,N");
}

void add_multiplicities(CLI::App* app, Multiplicities& m) {
  app->add_option("--c", m.c, "Multiplicity of every orbit");
  app->add_option("--c1", m.c1, "Multiplicity of orbit c1");
  app->add_option("--c2", m.c2, "Multiplicity of orbit c2");
  app->add_option("--mult", m.assign, "label=value, repeatable");
  app->add_option("--c0", m.c0, "G(m,p,N): parameter of the reflections s_ij^k");
  app->add_option("--c0-tilde", m.c0_tilde, "G(m,p,2), p even: parameter of odd s_12^k");
  app->add_option("--ct", m.ct, "G(m,p,N): c1,c2,... of the diagonal reflections");
}

FieldElement sample_rational(std::mt19937_64& rng) {
  long num = 1 + static_cast<long>(rng() % 9);
  long den = 2 + static_cast<long>(rng() % 8);
  return FieldElement(mpq_class(num, den));
}

/// Explicit multiplicities, or nullopt when none were given.
std::optional<MultiplicityFunction> explicit_multiplicities(const RootSystem& R, const Multiplicities& m) {
  if (m.symbolic) return MultiplicityFunction::symbolic(R);
  std::map<std::string, std::string> given;
  if (!m.c.empty())
    for (auto& l : R.orbit_labels) given[l] = m.c;
  auto set = [&](const std::string& label, const std::string& value) {
    if (std::find(R.orbit_labels.begin(), R.orbit_labels.end(), label) == R.orbit_labels.end())
      throw ParseError(R.family + " has no root orbit labelled " + label);
    given[label] = value;
  };
  if (!m.c1.empty()) set("c1", m.c1);
  if (!m.c2.empty()) set("c2", m.c2);
  for (auto& a : m.assign) {
    auto eq = a.find('=');
    if (eq == std::string::npos) throw ParseError("--mult expects label=value, got '" + a + "'");
    set(a.substr(0, eq), a.substr(eq + 1));
  }
  if (given.empty()) return std::nullopt;
  MultiplicityFunction c;
  for (auto& l : R.orbit_labels) {
    auto it = given.find(l);
    if (it == given.end()) throw ParseError("no multiplicity given for orbit " + l);
    c.by_label[l] = LinearExpr(parse_element(it->second, R.field));
  }
  return c;
}

MultiplicityFunction sampled_multiplicities(const RootSystem& R, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MultiplicityFunction c;
  for (auto& l : R.orbit_labels) c.by_label[l] = LinearExpr(sample_rational(rng));
  return c;
}

/// Multiplicities fixed by the invariance constraints, if every orbit is fixed.
std::optional<MultiplicityFunction> solved_multiplicities(const RootSystem& R, const ConstraintSolution& sol) {
  if (!sol.consistent) return std::nullopt;
  MultiplicityFunction c;
  for (auto& l : R.orbit_labels) {
    auto it = sol.values.find(l);
    if (it == sol.values.end()) return std::nullopt;
    c.by_label[l] = LinearExpr(it->second);
  }
  return c;
}

json multiplicities_json(const MultiplicityFunction& c) {
  json j = json::object();
  for (auto& [k, v] : c.by_label) j[k] = v.to_string();
  return j;
}

RootSystem load_family(const Target& t) {
  if (t.family.empty()) throw ParseError("--family is required");
  try {
    return build_root_system(t.family, t.rank);
  } catch (const RootSystemError& e) {
    throw ParseError(e.what());
  }
}

ComplexReflectionGroup load_group(const std::string& spec) {
  std::vector<long> v;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stol(item));
    } catch (...) {
      throw ParseError("bad group parameter '" + item + "'");
    }
  }
  if (v.size() != 3) throw ParseError("--group expects m,p,N");
  try {
    return ComplexReflectionGroup(v[0], v[1], v[2]);
  } catch (const RootSystemError& e) {
    throw ParseError(e.what());
  }
}

ComplexMultiplicities complex_multiplicities(const ComplexReflectionGroup& G, const Multiplicities& m,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ComplexMultiplicities mu;
  mu.c0 = m.c0.empty() ? sample_rational(rng) : parse_element(m.c0, rational_field());
  if (!m.c0_tilde.empty()) mu.c0_tilde = parse_element(m.c0_tilde, rational_field());
  std::vector<std::string> cts;
  std::stringstream ss(m.ct);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) cts.push_back(item);
  if (static_cast<long>(cts.size()) > G.order() - 1)
    throw ParseError("G(m,p,N) has only " + std::to_string(G.order() - 1) + " diagonal parameters");
  for (long t = 1; t < G.order(); ++t) {
    auto idx = static_cast<std::size_t>(t - 1);
    mu.c.push_back(idx < cts.size() ? parse_element(cts[idx], rational_field()) : sample_rational(rng));
  }
  return mu;
}

std::map<std::string, long> ideal_params(const std::string& text, std::string& head) {
  auto colon = text.find(':');
  head = text.substr(0, colon);
  if (colon == std::string::npos) return {};
  return detail::parse_params(text.substr(colon + 1));
}

long need(const std::map<std::string, long>& p, const char* key) {
  auto it = p.find(key);
  if (it == p.end()) throw ParseError(std::string("missing parameter ") + key);
  return it->second;
}

long get_or(const std::map<std::string, long>& p, const char* key, long dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

json nodes_json(const std::vector<std::size_t>& nodes) {
  std::vector<std::size_t> one;
  for (auto i : nodes) one.push_back(i + 1);
  return one;
}

class Output {
 public:
  explicit Output(const Common& o) : opts_(o) {}

  void emit(const json& j, const std::string& table) const {
    std::string text = opts_.pretty ? table : j.dump(2) + "\n";
    if (opts_.out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(opts_.out);
    if (!f) throw std::runtime_error("cannot write " + opts_.out);
    f << text;
  }

 private:
  const Common& opts_;
};

std::string report_table(const IdentityReport& r) {
  std::ostringstream os;
  os << r.context << "\n  degree bound " << r.degree_bound << ", " << r.identities_checked << " identities, "
     << r.violations.size() << " violations\n";
  for (auto& v : r.violations) os << "  ! " << v << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// check

int run_check_complex(const Target& t, const Multiplicities& m, const Common& o) {
  ComplexReflectionGroup G = load_group(t.group);
  ComplexMultiplicities mu = complex_multiplicities(G, m, o.seed);
  std::string head;
  auto p = ideal_params(t.subgraph, head);
  std::size_t bound = get_or(p, "bound", static_cast<long>(kDirectTestOrbitBound));
  ComplexVerdict v;
  if (head == "blocks") {
    v = invariance_qr(G, mu, get_or(p, "q", 1), need(p, "r"), get_or(p, "eps", 0), o.seed, bound);
  } else if (head == "zeros") {
    v = invariance_l(G, mu, need(p, "l"), o.seed, bound);
  } else if (head == "combined") {
    v = invariance_combined(G, mu, get_or(p, "q", 1), need(p, "r"), need(p, "l"), o.seed, bound);
  } else if (head == "rank2") {
    if (G.N() != 2) throw ParseError("rank2 ideals need N = 2");
    long i = need(p, "i");
    if (i < 1 || i > 4) throw ParseError("rank2 ideal index must be 1..4");
    v = invariance_n2_even(G.m(), G.p(), mu, o.seed)[static_cast<std::size_t>(i - 1)];
  } else {
    throw ParseError("unknown ideal '" + t.subgraph + "' (blocks:, zeros:, combined:, rank2:)");
  }
  std::ostringstream os;
  os << v.group << " " << v.ideal << "\n  condition  " << v.condition << " (" << (v.closed_form ? "holds" : "fails")
     << ")\n  direct     " << (v.invariant() ? "invariant" : "not invariant") << "\n";
  Output(o).emit(v.to_json(), os.str());
  return v.invariant() ? kOk : kNegative;
}

int run_check(const Target& t, const Multiplicities& m, bool direct, std::size_t trials, const Common& o) {
  if (!t.group.empty()) return run_check_complex(t, m, o);
  RootSystem R = load_family(t);
  auto nodes = resolve_subgraph(R, t.subgraph);
  auto c = explicit_multiplicities(R, m);
  bool symbolic = !c || !c->is_numeric();
  InvarianceVerdict v = invariance_criterion(R, c ? *c : MultiplicityFunction::symbolic(R), nodes);
  json j = v.to_json();
  if (c) j["c"] = multiplicities_json(*c);
  std::ostringstream os;
  os << v.family << " " << (v.subgraph.empty() ? "(empty)" : v.subgraph) << "\n";
  for (auto& comp : v.components) os << "  " << comp.type << "  h = " << comp.h.to_string() << "\n";
  int code;
  if (symbolic) {
    os << "  " << v.constraints.text << "\n";
    code = v.constraints.consistent ? kOk : kNegative;
  } else {
    os << "  " << (*v.invariant ? "invariant" : "not invariant") << "\n";
    code = *v.invariant ? kOk : kNegative;
    if (direct) {
      auto rep = invariance_direct_test(R, *c, nodes, trials, o.seed);
      j["direct"] = rep.to_json();
      os << "  direct test " << (rep.witness.invariant ? "invariant" : "not invariant") << " (orbit "
         << rep.witness.orbit_size << ")\n";
    }
  }
  Output(o).emit(j, os.str());
  return code;
}

// ---------------------------------------------------------------------------
// restrict

int run_restrict(const Target& t, const Multiplicities& m, bool force, const Common& o) {
  RootSystem R = load_family(t);
  auto nodes = resolve_subgraph(R, t.subgraph);
  Stratum s = make_stratum(R, nodes, false);
  auto c = explicit_multiplicities(R, m);
  InvarianceVerdict solved = solve_multiplicities(R, nodes);
  if (!c) {
    if (auto fixed = solved_multiplicities(R, solved.constraints)) {
      c = fixed;
    } else if (!solved.constraints.consistent && !force) {
      throw NotInvariantError("stratum " + s.type_name() + " of " + R.family + " is never invariant");
    } else {
      c = MultiplicityFunction::symbolic(R);
    }
  }
  RestrictedConfig cfg = restricted_configuration(R, *c, s, force);
  RestrictedOperator radial = emit_radial_operator(cfg);
  json j;
  j["family"] = R.family;
  j["subgraph"] = s.type_name();
  j["nodes"] = nodes_json(nodes);
  j["c"] = multiplicities_json(*c);
  j["constraints"] = solved.constraints.text;
  j["configuration"] = cfg.to_json();
  j["fingerprint_hash"] = fingerprint(cfg).hash_hex();
  j["radial"] = radial.to_json();
  std::ostringstream os;
  os << R.family << " restricted to " << (s.type_name().empty() ? "(empty)" : s.type_name()) << "\n  dim "
     << cfg.dim() << ", " << cfg.lines.size() << " lines\n";
  for (auto& [val, n] : cfg.multiplicity_counts()) os << "  m = " << val << "  x" << n << "\n";
  os << "  L = " << radial.to_string() << "\n";
  if (c->is_numeric()) {
    RestrictedOperator pot = emit_potential_operator(cfg);
    j["potential"] = pot.to_json();
    os << "  H = " << pot.to_string() << "\n";
  }
  Output(o).emit(j, os.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite;
  unsigned degree = 0;
  std::string omega;
  unsigned k = 1, l = 2;
  std::string golden;
  std::string rows;
};

std::vector<int> parse_rows(const std::string& text) {
  std::vector<int> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      ids.push_back(std::stoi(item));
    } catch (...) {
      throw ParseError("bad row id '" + item + "'");
    }
  }
  return ids;
}

std::string catalog_table(const CatalogResult& res) {
  std::ostringstream os;
  os << "row  family  subgraph    dim  lines  multiplicities                 status\n";
  for (auto& r : res.rows) {
    std::string counts = detail::counts_string(r.counts);
    std::string status = r.match ? "ok" : (r.erratum_match ? "erratum" : "DIFF");
    os << std::left << std::setw(5) << r.golden.row << std::setw(8) << r.golden.family << std::setw(12) << r.subgraph
       << std::setw(5) << r.dim << std::setw(7) << r.line_count << std::setw(31) << counts << status << "\n";
    for (auto& d : r.diff) os << "     ! " << d << "\n";
  }
  os << res.matched() << "/" << res.rows.size() << " rows match\n";
  return os.str();
}

CatalogResult run_catalog_rows(const std::string& golden, const std::string& rows) {
  auto table = golden.empty() ? load_golden_table() : load_golden_table(golden);
  return catalog_generate(table, parse_rows(rows));
}

int run_verify(const Target& t, const Multiplicities& m, const VerifyArgs& a, const Common& o) {
  if (a.suite == "catalog") {
    CatalogResult res = run_catalog_rows(a.golden, a.rows);
    Output(o).emit(res.to_json(), catalog_table(res));
    return res.matched() == res.rows.size() ? kOk : kNegative;
  }
  IdentityReport rep;
  json j;
  if (a.suite == "commutativity" && !t.group.empty()) {
    ComplexReflectionGroup G = load_group(t.group);
    ComplexMultiplicities mu = complex_multiplicities(G, m, o.seed);
    rep = check_commutativity(make_complex_dunkl(G, mu), a.degree ? a.degree : 4);
    rep.context = G.name() + " " + mu.to_json().dump();
    j["parameters"] = mu.to_json();
  } else {
    RootSystem R = load_family(t);
    auto c = explicit_multiplicities(R, m);
    std::optional<FieldElement> omega;
    if (!a.omega.empty()) omega = parse_element(a.omega, R.field);
    if (a.suite == "commutativity") {
      if (!c) c = sampled_multiplicities(R, o.seed);
      rep = check_commutativity(make_dunkl_context(R, *c), a.degree ? a.degree : 4);
    } else if (a.suite == "deformed") {
      if (!omega) throw ParseError("deformed suite needs --omega");
      if (!c) c = sampled_multiplicities(R, o.seed);
      DunklContext ctx = make_dunkl_context(R, *c, omega);
      rep = check_deformed_integrability(ctx, a.k, a.l, a.degree ? a.degree : 3);
    } else if (a.suite == "gauge" || a.suite == "restriction") {
      auto nodes = resolve_subgraph(R, t.subgraph);
      Stratum s = make_stratum(R, nodes, false);
      if (!c) {
        c = solved_multiplicities(R, solve_multiplicities(R, nodes).constraints);
        if (!c) throw ParseError("multiplicities are not fixed by the stratum; pass --c");
      }
      rep = a.suite == "gauge" ? verify_gauge_identity(R, *c, s)
                               : verify_restriction_identity(R, *c, s, a.degree ? a.degree : 6, omega);
      j["subgraph"] = s.type_name();
      j["nodes"] = nodes_json(nodes);
    } else {
      throw ParseError("unknown suite '" + a.suite + "'");
    }
    j["c"] = multiplicities_json(*c);
    if (omega) j["omega"] = omega->to_string();
  }
  j["suite"] = a.suite;
  j["report"] = rep.to_json();
  j["pass"] = rep.ok();
  Output(o).emit(j, report_table(rep));
  return rep.ok() ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// solve

int run_solve(const Target& t, std::size_t max_size, const Common& o) {
  RootSystem R = load_family(t);
  json j;
  j["family"] = R.family;
  j["orbit_labels"] = R.orbit_labels;
  j["strata"] = json::array();
  std::ostringstream os;
  bool any = false;
  auto add = [&](const std::vector<std::size_t>& nodes) {
    InvarianceVerdict v = solve_multiplicities(R, nodes);
    j["strata"].push_back(v.to_json());
    os << std::left << std::setw(10) << R.family << std::setw(16) << (v.subgraph.empty() ? "(empty)" : v.subgraph)
       << v.constraints.text << "\n";
    any = any || v.constraints.consistent;
  };
  if (!t.subgraph.empty()) {
    add(resolve_subgraph(R, t.subgraph));
  } else {
    for (auto& s : enumerate_parabolic_strata(R, max_size)) add(s.nodes);
  }
  Output(o).emit(j, os.str());
  return any ? kOk : kNegative;
}

int report_error(const std::string& kind, const std::string& msg, int code) {
  json j{{"error", kind}, {"message", msg}};
  std::cout << j.dump(2) << "\n";
  std::cerr << "cherednik: " << msg << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dunkl operators, invariant parabolic strata and restricted Calogero-Moser systems"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML file");

  Common common;
  Target target;
  Multiplicities mult;

  auto* check = app.add_subcommand("check", "Decide invariance of a stratum ideal");
  add_common(check, common);
  add_target(check, target, true);
  add_multiplicities(check, mult);
  bool direct = false;
  std::size_t trials = 1;
  check->add_flag("--symbolic", mult.symbolic, "Solve for the multiplicities instead");
  check->add_flag("--direct", direct, "Also run the direct Dunkl witness test");
  check->add_option("--trials", trials, "Witness trials per orbit element")->capture_default_str();

  auto* restrict_cmd = app.add_subcommand("restrict", "Restricted configuration and operators of a stratum");
  add_common(restrict_cmd, common);
  add_target(restrict_cmd, target, true);
  add_multiplicities(restrict_cmd, mult);
  bool force = false;
  restrict_cmd->add_flag("--force", force, "Restrict even if the stratum is not invariant");

  VerifyArgs vargs;
  auto* verify = app.add_subcommand("verify", "Run an identity suite");
  add_common(verify, common);
  add_target(verify, target, true);
  add_multiplicities(verify, mult);
  verify->add_option("suite", vargs.suite, "commutativity | gauge | restriction | deformed | catalog")
      ->required()
      ->check(CLI::IsMember({"commutativity", "gauge", "restriction", "deformed", "catalog"}));
  verify->add_option("--degree", vargs.degree, "Monomial degree bound (test degree for restriction)");
  verify->add_option("--omega", vargs.omega, "Harmonic deformation parameter");
  verify->add_option("--k", vargs.k, "First power sum for the deformed suite")->capture_default_str();
  verify->add_option("--l", vargs.l, "Second power sum for the deformed suite")->capture_default_str();
  verify->add_option("--golden", vargs.golden, "Golden table JSON");
  verify->add_option("--rows", vargs.rows, "Comma-separated row ids");

  std::string cat_golden, cat_rows;
  auto* catalog = app.add_subcommand("catalog", "Restricted configurations for the golden table rows");
  add_common(catalog, common);
  catalog->add_option("--golden", cat_golden, "Golden table JSON");
  catalog->add_option("--rows", cat_rows, "Comma-separated row ids");

  std::size_t max_size = 2;
  auto* solve = app.add_subcommand("solve", "Multiplicity conditions for invariance");
  add_common(solve, common);
  add_target(solve, target, true);
  solve->add_option("--max-size", max_size, "Largest subgraph size when enumerating strata")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (common.orbit_cap > 0) setenv("CHEREDNIK_ORBIT_CAP", std::to_string(common.orbit_cap).c_str(), 1);

  try {
    if (*check) return run_check(target, mult, direct, trials, common);
    if (*restrict_cmd) return run_restrict(target, mult, force, common);
    if (*verify) return run_verify(target, mult, vargs, common);
    if (*solve) return run_solve(target, max_size, common);
    if (*catalog) {
      CatalogResult res = run_catalog_rows(cat_golden, cat_rows);
      Output(common).emit(res.to_json(), catalog_table(res));
      return kOk;
    }
  } catch (const NotInvariantError& e) {
    return report_error("not_invariant", e.what(), kNegative);
  } catch (const InfeasibleError& e) {
    return report_error("infeasible", e.what(), kInfeasible);
  } catch (const OrbitCapExceeded& e) {
    return report_error("orbit_cap", e.what(), kInfeasible);
  } catch (const ParseError& e) {
    return report_error("usage", e.what(), kUsage);
  } catch (const nlohmann::json::exception& e) {
    return report_error("usage", e.what(), kUsage);
  } catch (const RootSystemError& e) {
    return report_error("usage", e.what(), kUsage);
  } catch (const std::exception& e) {
    return report_error("error", e.what(), kUsage);
  }
  return kUsage;
}
