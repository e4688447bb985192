#pragma once

// Invariance of parabolic ideals: the Coxeter-number criterion, the witness
// test, symbolic solving for multiplicities and ideals of higher vanishing
// order along one root orbit.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "cherednik/dunkl.hpp"
#include "cherednik/linalg.hpp"
#include "cherednik/linexpr.hpp"
#include "cherednik/multipoly.hpp"
#include "cherednik/rootsys.hpp"
#include "cherednik/witness.hpp"

namespace cherednik {

struct ConstraintSolution {
  bool consistent = true;
  bool determined = false;
  std::vector<std::string> equations;  // distinct equations, in input form
  std::map<std::string, FieldElement> values;  // parameters fixed by the equations
  std::string text;
};

/// Solves {e = 1 : e in exprs} over the parameters occurring in exprs.
inline ConstraintSolution solve_unit_constraints(const std::vector<LinearExpr>& exprs) {
  ConstraintSolution out;
  std::set<std::string> names;
  for (auto& e : exprs)
    for (auto& [k, v] : e.terms())
      if (!k.empty()) names.insert(k);
  std::vector<std::string> params(names.begin(), names.end());
  FieldRef f = rational_field();
  for (auto& e : exprs)
    for (auto& [k, v] : e.terms()) f = common_field(f, v.field());

  Matrix rows;
  std::vector<LinearExpr> kept;
  for (auto& e : exprs) {
    FieldElement rhs = FieldElement(f, 1) - e.constant();
    if (e.is_constant()) {
      if (!rhs.is_zero()) out.consistent = false;
      continue;
    }
    Vector row;
    for (auto& p : params) row.push_back(e.coefficient(p).embed(f));
    row.push_back(rhs.embed(f));
    Matrix probe = rows;
    probe.push_back(row);
    if (rank(probe) == rows.size()) continue;  // implied by earlier equations
    rows.push_back(row);
    kept.push_back(e);
  }
  for (auto& e : kept) out.equations.push_back(e.equation_string(FieldElement(1)));
  if (!out.consistent) {
    out.text = "never invariant";
    return out;
  }
  if (rows.empty()) {
    out.determined = params.empty();
    out.text = "always invariant";
    return out;
  }
  Matrix red = rows;
  auto pivots = rref(red);
  if (!pivots.empty() && pivots.back() == params.size()) {
    out.consistent = false;
    out.text = "never invariant";
    return out;
  }
  bool single = true;
  for (auto& r : red) {
    std::size_t nz = 0;
    for (std::size_t j = 0; j < params.size(); ++j) nz += !r[j].is_zero();
    if (nz != 1) single = false;
  }
  out.determined = single && red.size() == params.size();
  if (!single) {
    std::string joined;
    for (auto& s : out.equations) joined += (joined.empty() ? "" : ", ") + s;
    out.text = joined;
    return out;
  }
  std::string joined;
  for (std::size_t r = 0; r < red.size(); ++r) {
    std::size_t j = pivots[r];
    out.values.emplace(params[j], red[r][params.size()]);
    joined += (joined.empty() ? "" : ", ") + params[j] + " = " + red[r][params.size()].to_string();
  }
  out.text = joined;
  return out;
}

struct ComponentVerdict {
  std::vector<std::size_t> nodes;
  std::string type;
  LinearExpr h;
};

struct InvarianceVerdict {
  std::string family;
  std::vector<std::size_t> nodes;
  std::string subgraph;
  std::vector<ComponentVerdict> components;
  std::optional<bool> invariant;  // set for numeric multiplicities
  ConstraintSolution constraints;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["family"] = family;
    j["subgraph"] = subgraph;
    std::vector<std::size_t> n1;
    for (auto i : nodes) n1.push_back(i + 1);
    j["nodes"] = n1;
    j["components"] = nlohmann::json::array();
    for (auto& c : components) {
      std::vector<std::size_t> c1;
      for (auto i : c.nodes) c1.push_back(i + 1);
      j["components"].push_back({{"type", c.type}, {"nodes", c1}, {"h", c.h.to_string()}});
    }
    j["invariant"] = invariant ? nlohmann::json(*invariant) : nlohmann::json(nullptr);
    j["constraints"] = constraints.equations;
    j["solution"] = constraints.text;
    return j;
  }
};

/// Invariant iff every component has generalized Coxeter number 1.
inline InvarianceVerdict invariance_criterion(const RootSystem& R, const MultiplicityFunction& c,
                                              const std::vector<std::size_t>& nodes) {
  Stratum s = make_stratum(R, nodes, false);
  InvarianceVerdict v;
  v.family = R.family;
  v.nodes = s.nodes;
  v.subgraph = s.type_name();
  std::vector<LinearExpr> hs;
  for (auto& comp : s.components) {
    LinearExpr h = generalized_coxeter_number(R, c, comp);
    v.components.push_back({comp, classify_component(R, comp).name(), h});
    hs.push_back(h);
  }
  v.constraints = solve_unit_constraints(hs);
  if (c.is_numeric()) {
    bool all = true;
    for (auto& h : hs) all = all && h == LinearExpr(1);
    v.invariant = all;
  }
  return v;
}

/// Linear conditions on the symbolic multiplicities of R.
inline InvarianceVerdict solve_multiplicities(const RootSystem& R, const std::vector<std::size_t>& nodes) {
  return invariance_criterion(R, MultiplicityFunction::symbolic(R), nodes);
}

struct StrataDirectReport {
  DirectTestReport witness;
  bool criterion_invariant = false;
  bool agrees() const { return witness.invariant == criterion_invariant; }

  nlohmann::json to_json() const {
    nlohmann::json j = witness.to_json();
    j["criterion_invariant"] = criterion_invariant;
    j["agrees"] = agrees();
    return j;
  }
};

inline StrataDirectReport invariance_direct_test(const RootSystem& R, const MultiplicityFunction& c,
                                                 const std::vector<std::size_t>& nodes, std::size_t trials = 1,
                                                 std::uint64_t seed = 1, std::size_t orbit_bound = kDirectTestOrbitBound) {
  if (!c.is_numeric()) throw RootSystemError("direct test needs numeric multiplicities");
  Stratum s;
  try {
    s = make_stratum(R, nodes, true, orbit_bound + 1);
  } catch (const OrbitCapExceeded&) {
    throw InfeasibleError("orbit exceeds the direct-test bound " + std::to_string(orbit_bound));
  }
  DunklContext ctx = make_dunkl_context(R, c);
  std::vector<Vector> betas;
  for (auto i : s.nodes) betas.push_back(R.simple_roots[i]);
  StrataDirectReport rep;
  rep.witness = direct_invariance_test(ctx.system, s.pi, s.orbit, betas, trials, seed, orbit_bound);
  rep.criterion_invariant = *invariance_criterion(R, c, nodes).invariant;
  return rep;
}

struct OrderVanishingVerdict {
  std::string label;
  unsigned m = 1;
  FieldElement c_value;
  bool invariant = true;
  bool closed_form = false;  // c(S1) = (2m-1)/2
  std::vector<std::string> failures;

  bool agrees() const { return invariant == closed_form; }
  nlohmann::json to_json() const {
    return {{"orbit", label},       {"m", m},
            {"c", c_value.to_string()}, {"invariant", invariant},
            {"closed_form", closed_form}, {"agrees", agrees()},
            {"failures", failures}};
  }
};

/// Invariance of the ideal of polynomials vanishing to order 2m-1 on the
/// mirrors of the roots labelled `label`, tested on P*f for sample f.
inline OrderVanishingVerdict order_vanishing_invariance(const RootSystem& R, const MultiplicityFunction& c,
                                                        const std::string& label, unsigned m, std::uint64_t seed = 1) {
  if (m < 1) throw RootSystemError("order parameter m must be at least 1");
  OrderVanishingVerdict v;
  v.label = label;
  v.m = m;
  std::vector<Vector> roots;
  for (std::size_t q = 0; q < R.num_positive(); ++q)
    if (R.label_of_root(q) == label) {
      roots.push_back(R.positive_roots[q]);
      v.c_value = c.numeric(R, q);
    }
  if (roots.empty()) throw RootSystemError("no roots in orbit " + label);
  v.closed_form = v.c_value == FieldElement(mpq_class(2 * static_cast<long>(m) - 1, 2));

  const std::size_t n = R.dim;
  const unsigned order = 2 * m - 1;
  Polynomial P = Polynomial::constant(n, field_one(R.field));
  for (auto& a : roots) P = P * Polynomial::linear_form(a, R.field).pow(order);

  std::vector<Polynomial> samples{Polynomial::constant(n, field_one(R.field))};
  for (std::size_t j = 0; j < n; ++j) samples.push_back(Polynomial::variable(n, R.field, j));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-4, 4);
  Polynomial quad(n, R.field);
  for (auto& e : monomials_up_to(n, 2)) quad.add_term(e, FieldElement(R.field, coef(rng)));
  samples.push_back(quad);

  DunklContext ctx = make_dunkl_context(R, c);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    Polynomial p = P * samples[k];
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial g = ctx.system.apply(i, p);
      for (auto& a : roots) {
        Polynomial rest = g;
        bool ok = true;
        for (unsigned t = 0; t < order && ok; ++t) {
          auto q = divide_linear(rest, a);
          if (!q) ok = false;
          else rest = std::move(*q);
        }
        if (ok) continue;
        v.invariant = false;
        if (v.failures.size() < 8)
          v.failures.push_back("nabla_" + std::to_string(i + 1) + " of sample " + std::to_string(k) +
                               " has lower order along " + vector_to_string(a));
      }
    }
  }
  return v;
}

}  // namespace cherednik
