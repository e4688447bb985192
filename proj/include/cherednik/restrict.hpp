#pragma once

// Restricted Calogero-Moser data on a parabolic stratum: projected root
// lines with summed multiplicities, their fingerprints, radial and potential
// forms, and exact checks of the gauge and restriction identities.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cherednik/dunkl.hpp"
#include "cherednik/linalg.hpp"
#include "cherednik/linexpr.hpp"
#include "cherednik/multipoly.hpp"
#include "cherednik/rootsys.hpp"
#include "cherednik/strata.hpp"

namespace cherednik {

class NotInvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigLine {
  Vector vector;  // canonical representative, ambient coordinates
  LinearExpr multiplicity;
  std::size_t roots = 0;  // positive roots grouped into the line
};

struct RestrictedConfig {
  Subspace pi;
  std::vector<ConfigLine> lines;
  std::size_t span_dim = 0;

  /// Dimension of the span of the lines.
  std::size_t dim() const { return span_dim; }
  std::size_t roots_grouped() const {
    std::size_t s = 0;
    for (auto& l : lines) s += l.roots;
    return s;
  }
  /// Multiplicity value -> number of lines.
  std::map<std::string, std::size_t> multiplicity_counts() const {
    std::map<std::string, std::size_t> m;
    for (auto& l : lines) ++m[l.multiplicity.to_string()];
    return m;
  }
  nlohmann::json to_json() const {
    nlohmann::json j;
    j["dim"] = dim();
    j["subspace_dim"] = pi.dim();
    j["line_count"] = lines.size();
    j["lines"] = nlohmann::json::array();
    for (auto& l : lines)
      j["lines"].push_back({{"vector", vector_json(l.vector)},
                            {"multiplicity", l.multiplicity.to_string()},
                            {"roots", l.roots}});
    j["multiplicities"] = multiplicity_counts();
    return j;
  }
};

namespace detail {

inline Vector normalize_first(const Vector& v) {
  for (auto& x : v)
    if (!x.is_zero()) return scale(v, x.inverse());
  return v;
}

/// Primitive integer vector with positive leading entry when rational,
/// otherwise leading entry 1.
inline Vector canonical_representative(const Vector& v) {
  bool rational = true;
  for (auto& x : v) rational = rational && x.is_rational();
  if (!rational) return normalize_first(v);
  mpz_class den = 1, num = 0;
  for (auto& x : v) {
    mpq_class q = x.rational_value();
    if (sgn(q) == 0) continue;
    den = lcm(den, mpz_class(q.get_den()));
  }
  for (auto& x : v) {
    mpq_class q = x.rational_value() * den;
    num = gcd(num, mpz_class(q.get_num()));
  }
  mpq_class s(den, num);
  for (auto& x : v)
    if (!x.is_zero()) {
      if (sgn(x.rational_value()) < 0) s = -s;
      break;
    }
  return scale(v, FieldElement(v.front().field(), s));
}

}  // namespace detail

/// Orthogonal projection onto pi.
inline Vector project_onto(const Subspace& pi, const Vector& a) {
  const Matrix& A = pi.annihilator();
  if (A.empty()) return a;
  Matrix G(A.size(), Vector(A.size()));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A.size(); ++j) G[i][j] = dot(A[i], A[j]);
  Matrix Ginv = inverse(G);
  Vector rhs(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) rhs[i] = dot(A[i], a);
  Vector lambda = matvec(Ginv, rhs);
  Vector out = a;
  for (std::size_t i = 0; i < A.size(); ++i) out = sub(out, scale(A[i], lambda[i]));
  return out;
}

/// Groups vectors of pi into lines, summing multiplicities.
inline RestrictedConfig make_config(const Subspace& pi, const std::vector<std::pair<Vector, LinearExpr>>& vectors) {
  RestrictedConfig cfg;
  cfg.pi = pi;
  std::map<std::string, std::size_t> index;
  for (auto& [v, m] : vectors) {
    if (is_zero_vector(v)) continue;
    if (!pi.contains(v)) throw RootSystemError("configuration vector outside the subspace");
    Vector n = detail::normalize_first(v);
    std::string key = detail::vector_key(n);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, cfg.lines.size());
      cfg.lines.push_back({detail::canonical_representative(v), m, 1});
    } else {
      cfg.lines[it->second].multiplicity += m;
      cfg.lines[it->second].roots += 1;
    }
  }
  Matrix m;
  for (auto& l : cfg.lines) m.push_back(l.vector);
  cfg.span_dim = m.empty() ? 0 : rank(m);
  return cfg;
}

/// Projects every positive root of R onto the stratum's subspace. Numeric
/// multiplicities must make the stratum invariant unless force is set.
inline RestrictedConfig restricted_configuration(const RootSystem& R, const MultiplicityFunction& c,
                                                 const Stratum& s, bool force = false) {
  if (!force && c.is_numeric() && !*invariance_criterion(R, c, s.nodes).invariant)
    throw NotInvariantError("stratum " + s.type_name() + " of " + R.family + " is not invariant for these multiplicities");
  std::vector<std::pair<Vector, LinearExpr>> projected;
  for (std::size_t q = 0; q < R.num_positive(); ++q)
    projected.emplace_back(project_onto(s.pi, R.positive_roots[q]), c.of(R, q));
  return make_config(s.pi, projected);
}

/// Configuration made of the positive roots of R with multiplicities per orbit.
inline RestrictedConfig root_system_config(const RootSystem& R, const MultiplicityFunction& c) {
  std::vector<std::pair<Vector, LinearExpr>> v;
  for (std::size_t q = 0; q < R.num_positive(); ++q) v.emplace_back(R.positive_roots[q], c.of(R, q));
  return make_config(Subspace::whole(R.dim, R.field), v);
}

// ---------------------------------------------------------------------------
// Fingerprints

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

struct ConfigFingerprint {
  std::size_t dim = 0;
  std::size_t line_count = 0;
  std::vector<std::string> multiplicities;  // sorted
  std::vector<std::string> pairs;           // sorted "m_u|m_v|cos^2"

  std::string serialize() const {
    std::string s = std::to_string(dim) + "#" + std::to_string(line_count) + "#";
    for (auto& m : multiplicities) s += m + ";";
    s += "#";
    for (auto& p : pairs) s += p + ";";
    return s;
  }
  std::uint64_t hash() const { return fnv1a(serialize()); }
  std::string hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
  }
  friend bool operator==(const ConfigFingerprint& a, const ConfigFingerprint& b) {
    return a.dim == b.dim && a.line_count == b.line_count && a.multiplicities == b.multiplicities && a.pairs == b.pairs;
  }
  friend bool operator!=(const ConfigFingerprint& a, const ConfigFingerprint& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const ConfigFingerprint& f) { return os << f.serialize(); }
};

/// Invariant under orthogonal maps and rescaling of representatives; with
/// with_multiplicities = false only the angles are recorded.
inline ConfigFingerprint fingerprint(const RestrictedConfig& cfg, bool with_multiplicities = true) {
  ConfigFingerprint fp;
  fp.dim = cfg.dim();
  fp.line_count = cfg.lines.size();
  std::vector<std::string> m;
  std::vector<FieldElement> norms;
  for (auto& l : cfg.lines) {
    m.push_back(with_multiplicities ? l.multiplicity.to_string() : "*");
    norms.push_back(dot(l.vector, l.vector));
  }
  fp.multiplicities = m;
  std::sort(fp.multiplicities.begin(), fp.multiplicities.end());
  for (std::size_t a = 0; a < cfg.lines.size(); ++a)
    for (std::size_t b = a + 1; b < cfg.lines.size(); ++b) {
      FieldElement d = dot(cfg.lines[a].vector, cfg.lines[b].vector);
      FieldElement cos2 = d * d / (norms[a] * norms[b]);
      const std::string& x = m[a];
      const std::string& y = m[b];
      fp.pairs.push_back((x < y ? x + "|" + y : y + "|" + x) + "|" + cos2.to_string());
    }
  std::sort(fp.pairs.begin(), fp.pairs.end());
  return fp;
}

// ---------------------------------------------------------------------------
// Operators in intrinsic coordinates y = (t_1..t_d), x = sum t_k b_k.

struct RadialTerm {
  Vector form;       // coefficients of (v, x) in t
  Vector direction;  // coordinates of v in the basis
  LinearExpr coefficient;
};

struct RestrictedOperator {
  Matrix basis;          // rows b_k
  Matrix metric_inverse; // inverse Gram matrix of the basis
  std::vector<RadialTerm> terms;
  bool potential = false;

  std::string to_string() const {
    const std::size_t d = basis.size();
    auto linear = [&](const Vector& v, const char* var) {
      std::string s;
      for (std::size_t k = 0; k < d; ++k) {
        if (v[k].is_zero()) continue;
        std::string c = v[k].to_string();
        bool neg = !c.empty() && c[0] == '-';
        if (neg) c = c.substr(1);
        bool plain = v[k].is_rational();
        std::string coef = (c == "1") ? "" : (plain ? c : "(" + c + ")") + "*";
        std::string term = coef + var + std::to_string(k + 1);
        s += s.empty() ? (neg ? "-" + term : term) : (neg ? " - " + term : " + " + term);
      }
      return s.empty() ? std::string("0") : s;
    };
    std::string out = "Delta";
    for (auto& t : terms) {
      if (t.coefficient.is_zero()) continue;
      std::string coef = t.coefficient.is_constant() ? t.coefficient.to_string() : "(" + t.coefficient.to_string() + ")";
      if (potential)
        out += " - " + coef + "/(" + linear(t.form, "y") + ")^2";
      else
        out += " - " + coef + "/(" + linear(t.form, "y") + ")*(" + linear(t.direction, "d") + ")";
    }
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["form"] = potential ? "potential" : "radial";
    j["basis"] = nlohmann::json::array();
    for (auto& b : basis) j["basis"].push_back(vector_json(b));
    j["metric_inverse"] = nlohmann::json::array();
    for (auto& r : metric_inverse) j["metric_inverse"].push_back(vector_json(r));
    j["terms"] = nlohmann::json::array();
    for (auto& t : terms) {
      nlohmann::json e{{"form", vector_json(t.form)}, {"coefficient", t.coefficient.to_string()}};
      if (!potential) e["direction"] = vector_json(t.direction);
      j["terms"].push_back(e);
    }
    j["text"] = to_string();
    return j;
  }
};

namespace detail {

inline RestrictedOperator operator_frame(const RestrictedConfig& cfg) {
  RestrictedOperator op;
  op.basis = cfg.pi.basis();
  const std::size_t d = op.basis.size();
  Matrix G(d, Vector(d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) G[a][b] = dot(op.basis[a], op.basis[b]);
  op.metric_inverse = d ? inverse(G) : Matrix{};
  return op;
}

inline Vector form_in_basis(const Matrix& basis, const Vector& v) {
  Vector f;
  for (auto& b : basis) f.push_back(dot(v, b));
  return f;
}

}  // namespace detail

/// Delta - sum_lines 2 m_v/(v, y) d_v.
inline RestrictedOperator emit_radial_operator(const RestrictedConfig& cfg) {
  RestrictedOperator op = detail::operator_frame(cfg);
  for (auto& l : cfg.lines) {
    Vector form = detail::form_in_basis(op.basis, l.vector);
    Vector dir = op.basis.empty() ? Vector{} : matvec(op.metric_inverse, form);
    op.terms.push_back({form, dir, FieldElement(2) * l.multiplicity});
  }
  return op;
}

/// Delta - sum_lines m(m+1)(v,v)/(v, y)^2; needs numeric multiplicities.
inline RestrictedOperator emit_potential_operator(const RestrictedConfig& cfg) {
  RestrictedOperator op = detail::operator_frame(cfg);
  op.potential = true;
  for (auto& l : cfg.lines) {
    if (!l.multiplicity.is_constant()) throw RootSystemError("potential form needs numeric multiplicities");
    FieldElement m = l.multiplicity.constant();
    Vector form = detail::form_in_basis(op.basis, l.vector);
    op.terms.push_back({form, {}, LinearExpr(m * (m + FieldElement(1)) * dot(l.vector, l.vector))});
  }
  return op;
}

/// Applies a radial operator with numeric coefficients to P(t). Returns
/// nullopt with the failing term index if a term is not polynomial.
inline std::optional<Polynomial> apply_radial(const RestrictedOperator& op, const Polynomial& P, std::size_t* bad_term = nullptr) {
  const std::size_t d = op.basis.size();
  Polynomial out(d, P.field());
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      if (!op.metric_inverse[a][b].is_zero()) out += op.metric_inverse[a][b] * P.derivative(a).derivative(b);
  for (std::size_t k = 0; k < op.terms.size(); ++k) {
    const RadialTerm& t = op.terms[k];
    if (t.coefficient.is_zero()) continue;
    if (!t.coefficient.is_constant()) throw RootSystemError("radial operator has symbolic coefficients");
    Polynomial dv = P.directional_derivative(t.direction);
    if (dv.is_zero()) continue;
    auto q = divide_linear(dv, t.form);
    if (!q) {
      if (bad_term) *bad_term = k;
      return std::nullopt;
    }
    out -= t.coefficient.constant() * *q;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Identity checks

/// For each line u: sum_{v != u} m_v (u,v)/(v,x) = 0 on {x in pi : (u,x) = 0}.
/// Terms whose forms restrict proportionally are combined, and each combined
/// coefficient must vanish.
inline IdentityReport verify_gauge_identity(const RestrictedConfig& cfg, const std::string& context = "") {
  IdentityReport rep;
  rep.context = context + " gauge identity";
  for (std::size_t u = 0; u < cfg.lines.size(); ++u) {
    const Vector& uv = cfg.lines[u].vector;
    Matrix forms = cfg.pi.annihilator();
    forms.push_back(uv);
    Subspace H = Subspace::from_annihilator(forms, cfg.pi.ambient_dim(), cfg.pi.field());
    if (H.dim() == 0) continue;
    std::map<std::string, std::pair<Vector, LinearExpr>> grouped;
    for (std::size_t v = 0; v < cfg.lines.size(); ++v) {
      if (v == u) continue;
      const Vector& vv = cfg.lines[v].vector;
      Vector restricted = detail::form_in_basis(H.basis(), vv);
      if (is_zero_vector(restricted)) throw RootSystemError("distinct lines restrict to a zero form");
      Vector n = detail::normalize_first(restricted);
      FieldElement lambda;
      for (std::size_t k = 0; k < restricted.size(); ++k)
        if (!restricted[k].is_zero()) {
          lambda = restricted[k];
          break;
        }
      LinearExpr term = (dot(uv, vv) / lambda) * cfg.lines[v].multiplicity;
      auto key = detail::vector_key(n);
      auto it = grouped.find(key);
      if (it == grouped.end())
        grouped.emplace(key, std::make_pair(n, term));
      else
        it->second.second += term;
    }
    for (auto& [key, entry] : grouped) {
      ++rep.identities_checked;
      if (!entry.second.is_zero())
        rep.violations.push_back("line " + vector_to_string(uv) + ": residue " + entry.second.to_string() +
                                 " along " + vector_to_string(entry.first));
    }
  }
  return rep;
}

inline IdentityReport verify_gauge_identity(const RootSystem& R, const MultiplicityFunction& c, const Stratum& s) {
  return verify_gauge_identity(restricted_configuration(R, c, s), R.family + " " + s.type_name());
}

/// p_k = sum over all roots of (a, x)^k.
inline Polynomial root_power_sum(const RootSystem& R, unsigned k) {
  Polynomial p(R.dim, R.field);
  for (auto& a : R.positive_roots) p += Polynomial::linear_form(a, R.field).pow(k);
  return FieldElement(2) * p;
}

/// Constant of the restricted deformed operator for families A, B, D.
inline FieldElement deformed_restriction_constant(const RootSystem& R, const MultiplicityFunction& c,
                                                  const FieldElement& omega) {
  const char l = R.type.letter;
  auto find = [&](std::initializer_list<std::pair<std::size_t, long>> e) {
    auto idx = R.find_root(detail::evec(R.field, R.dim, e));
    if (!idx) throw RootSystemError("missing reference root");
    return c.numeric(R, *idx);
  };
  if (l == 'A') {
    FieldElement N(static_cast<long>(R.dim));
    return omega * find({{0, 1}, {1, -1}}) * N * (N - FieldElement(1));
  }
  FieldElement N(static_cast<long>(R.rank()));
  FieldElement two(2);
  FieldElement r = two * omega * find({{0, 1}, {1, -1}}) * N * (N - FieldElement(1));
  if (l == 'B') r += two * omega * find({{0, 1}}) * N;
  return r;
}

/// (sum_i nabla_i^2 p)|pi equals the radial operator applied to p|pi for
/// invariant test polynomials p_k; with omega, the deformed version.
inline IdentityReport verify_restriction_identity(const RootSystem& R, const MultiplicityFunction& c, const Stratum& s,
                                                  unsigned test_degree,
                                                  const std::optional<FieldElement>& omega = std::nullopt) {
  RestrictedConfig cfg = restricted_configuration(R, c, s);
  RestrictedOperator op = emit_radial_operator(cfg);
  DunklContext ctx = make_dunkl_context(R, c, omega);
  IdentityReport rep;
  rep.context = ctx.describe() + " restriction to " + s.type_name();
  rep.degree_bound = test_degree;
  const Matrix& basis = cfg.pi.basis();
  const std::size_t n = R.dim;
  Polynomial norm2(n, R.field);
  for (std::size_t i = 0; i < n; ++i) norm2 += Polynomial::variable(n, R.field, i).pow(2);
  Polynomial norm2_pi = norm2.restrict_to(basis);
  std::optional<FieldElement> constant;
  if (omega) constant = deformed_restriction_constant(R, c, *omega);
  for (unsigned k = 0; k <= test_degree; k += 2) {
    Polynomial p = k == 0 ? Polynomial::constant(n, field_one(R.field)) : root_power_sum(R, k);
    Polynomial lhs_full(n, R.field);
    if (omega) {
      for (std::size_t i = 0; i < n; ++i) lhs_full += h_apply(ctx, i, p);
    } else {
      for (std::size_t i = 0; i < n; ++i) lhs_full += ctx.system.apply(i, ctx.system.apply(i, p));
    }
    Polynomial lhs = lhs_full.restrict_to(basis);
    Polynomial P = p.restrict_to(basis);
    std::size_t bad = 0;
    auto rhs = apply_radial(op, P, &bad);
    ++rep.identities_checked;
    if (!rhs) {
      rep.violations.push_back("p_" + std::to_string(k) + ": term along " + vector_to_string(cfg.lines[bad].vector) +
                               " is not polynomial");
      continue;
    }
    Polynomial r = *rhs;
    if (omega) {
      const FieldElement& w = *omega;
      r -= (w * w) * (norm2_pi * P);
      r -= (w * FieldElement(static_cast<long>(R.type.letter == 'A' ? R.dim : R.rank()))) * P;
      r += *constant * P;
    }
    if (r != lhs) rep.violations.push_back("p_" + std::to_string(k) + ": restriction differs by " + (lhs - r).to_string());
  }
  return rep;
}

}  // namespace cherednik
