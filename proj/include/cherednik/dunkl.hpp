#pragma once

// Dunkl operators for reflection groups given by reflection data, the real
// Coxeter case, invariant combinations, and deformed operators with a
// quadratic potential.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cherednik/exactfield.hpp"
#include "cherednik/linalg.hpp"
#include "cherednik/multipoly.hpp"
#include "cherednik/rootsys.hpp"

namespace cherednik {

/// A reflection acting on polynomials by (s f)(x) = f(action x). It fixes the
/// hyperplane (form, x) = 0 and action = I - displacement * form^T.
struct Reflection {
  Matrix action;
  Vector form;
  Vector displacement;
};

inline Reflection make_reflection(Matrix action, Vector form) {
  const std::size_t n = form.size();
  std::size_t j = 0;
  while (j < n && form[j].is_zero()) ++j;
  if (j == n) throw FieldError("reflection with zero form");
  Vector w(n);
  for (std::size_t i = 0; i < n; ++i) {
    FieldElement delta = (i == j ? FieldElement(1) : FieldElement(0)) - action[i][j];
    w[i] = delta / form[j];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      FieldElement expect = (i == k ? FieldElement(1) : FieldElement(0)) - w[i] * form[k];
      if (expect != action[i][k]) throw FieldError("matrix is not a reflection along the given form");
    }
  return {std::move(action), std::move(form), std::move(w)};
}

/// Term -weight * sum_{s < order} eta^{-s t} tau_coord^s / x_coord in the
/// operator for direction `coord`.
struct CyclicTerm {
  std::size_t coord;
  FieldElement weight;
  unsigned order;
  unsigned t;
};

struct IdentityReport {
  std::string context;
  unsigned degree_bound = 0;
  std::size_t identities_checked = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void merge(const IdentityReport& o) {
    identities_checked += o.identities_checked;
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
  }
  nlohmann::json to_json() const {
    return {{"context", context},
            {"degree_bound", degree_bound},
            {"identities_checked", identities_checked},
            {"violations", violations}};
  }
};

inline std::string exponent_string(const Exponent& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i]) continue;
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(i + 1);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

/// Dunkl operators
///   nabla_i f = d_i f - sum_H w_{H,i} (f - s_H f)/(L_H, x) - cyclic terms.
class DunklSystem {
 public:
  DunklSystem() = default;
  DunklSystem(std::size_t n, FieldRef f, std::string descriptor)
      : n_(n), field_(f), descriptor_(std::move(descriptor)), cache_(std::make_shared<Cache>(n)) {}

  std::size_t nvars() const { return n_; }
  FieldRef field() const { return field_; }
  const std::string& descriptor() const { return descriptor_; }
  const std::vector<Reflection>& reflections() const { return reflections_; }
  const std::vector<Vector>& weights() const { return weights_; }
  const std::vector<CyclicTerm>& cyclic_terms() const { return cyclic_; }
  /// Matrices generating the group (acting on polynomials by composition).
  const std::vector<Matrix>& generators() const { return generators_; }

  void add_reflection(Reflection r, Vector weight) {
    reflections_.push_back(std::move(r));
    weights_.push_back(std::move(weight));
    cache_ = std::make_shared<Cache>(n_);
  }
  void add_cyclic(CyclicTerm t) {
    cyclic_.push_back(std::move(t));
    cache_ = std::make_shared<Cache>(n_);
  }
  void set_generators(std::vector<Matrix> g) { generators_ = std::move(g); }

  Polynomial apply(std::size_t i, const Polynomial& f) const {
    Polynomial r(n_, common_field(field_, f.field()));
    for (auto& [e, c] : f.terms()) r += c * apply_monomial(i, e);
    return r;
  }

  Polynomial apply(const Vector& xi, const Polynomial& f) const {
    Polynomial r(n_, common_field(field_, f.field()));
    for (std::size_t i = 0; i < n_; ++i)
      if (!xi[i].is_zero()) r += xi[i] * apply(i, f);
    return r;
  }

  /// nabla_i on a monomial, memoized.
  const Polynomial& apply_monomial(std::size_t i, const Exponent& e) const {
    {
      std::lock_guard<std::mutex> lock(cache_->mu);
      auto it = cache_->by_coord[i].find(e);
      if (it != cache_->by_coord[i].end()) return it->second;
    }
    Polynomial mono = Polynomial::monomial(field_, e);
    Polynomial r = mono.derivative(i);
    for (std::size_t h = 0; h < reflections_.size(); ++h) {
      const FieldElement& w = weights_[h][i];
      if (w.is_zero()) continue;
      const Reflection& ref = reflections_[h];
      Polynomial diff = mono - mono.compose_linear(ref.action);
      if (diff.is_zero()) continue;
      auto q = divide_linear(diff, ref.form);
      if (!q) throw FieldError("divided difference left a nonzero remainder");
      r -= w * *q;
    }
    for (auto& ct : cyclic_) {
      if (ct.coord != i || e[i] == 0) continue;
      if (e[i] % ct.order != ct.t % ct.order) continue;
      Exponent d(e);
      d[i] -= 1;
      r.add_term(d, -(ct.weight * FieldElement(static_cast<long>(ct.order))));
    }
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->by_coord[i].emplace(e, std::move(r)).first->second;
  }

 private:
  struct Cache {
    explicit Cache(std::size_t n) : by_coord(n) {}
    std::mutex mu;
    std::vector<std::map<Exponent, Polynomial>> by_coord;
  };

  std::size_t n_ = 0;
  FieldRef field_ = rational_field();
  std::string descriptor_;
  std::vector<Reflection> reflections_;
  std::vector<Vector> weights_;
  std::vector<CyclicTerm> cyclic_;
  std::vector<Matrix> generators_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>(0);
};

/// Dunkl data of a Coxeter root system with numeric multiplicities, plus an
/// optional deformation parameter omega.
struct DunklContext {
  const RootSystem* R = nullptr;
  MultiplicityFunction c;
  std::optional<FieldElement> omega;
  DunklSystem system;

  std::string describe() const {
    std::string s = R->family + " [";
    bool first = true;
    for (auto& [k, v] : c.by_label) {
      if (!first) s += ", ";
      first = false;
      s += k + "=" + v.to_string();
    }
    s += "]";
    if (omega) s += " omega=" + omega->to_string();
    return s;
  }
};

/// Builds nabla_xi = d_xi - sum_{a>0} c_a (a, xi)/(a, x) (1 - s_a).
inline DunklContext make_dunkl_context(const RootSystem& R, MultiplicityFunction c,
                                       std::optional<FieldElement> omega = std::nullopt) {
  DunklContext ctx;
  ctx.R = &R;
  ctx.c = std::move(c);
  ctx.omega = std::move(omega);
  ctx.system = DunklSystem(R.dim, R.field, ctx.describe());
  for (std::size_t q = 0; q < R.num_positive(); ++q) {
    const Vector& a = R.positive_roots[q];
    ctx.system.add_reflection(make_reflection(R.root_reflections[q], a), scale(a, ctx.c.numeric(R, q)));
  }
  ctx.system.set_generators(R.simple_reflections);
  return ctx;
}

inline Polynomial apply_dunkl(const DunklContext& ctx, const Vector& xi, const Polynomial& f) {
  return ctx.system.apply(xi, f);
}

/// [nabla_i, nabla_j] = 0 on all monomials of degree <= degree_bound.
inline IdentityReport check_commutativity(const DunklSystem& sys, unsigned degree_bound) {
  IdentityReport rep;
  rep.context = sys.descriptor();
  rep.degree_bound = degree_bound;
  const std::size_t n = sys.nvars();
  for (auto& e : monomials_up_to(n, degree_bound)) {
    Polynomial m = Polynomial::monomial(sys.field(), e);
    std::vector<Polynomial> first;
    for (std::size_t i = 0; i < n; ++i) first.push_back(sys.apply(i, m));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        ++rep.identities_checked;
        Polynomial comm = sys.apply(i, first[j]) - sys.apply(j, first[i]);
        if (!comm.is_zero())
          rep.violations.push_back("[nabla_" + std::to_string(i + 1) + ", nabla_" + std::to_string(j + 1) + "] " +
                                   exponent_string(e) + " = " + comm.to_string());
      }
  }
  return rep;
}

inline IdentityReport check_commutativity(const DunklContext& ctx, unsigned degree_bound) {
  return check_commutativity(ctx.system, degree_bound);
}

/// Checks that sigma is fixed by every generator.
inline bool is_invariant(const Polynomial& sigma, const std::vector<Matrix>& generators) {
  for (auto& g : generators)
    if (sigma.compose_linear(g) != sigma) return false;
  return true;
}

/// sigma(nabla_1, ..., nabla_n) f for a W-invariant polynomial sigma.
inline Polynomial apply_invariant_combination(const DunklSystem& sys, const Polynomial& sigma, const Polynomial& f) {
  if (!is_invariant(sigma, sys.generators()))
    throw FieldError("sigma is not invariant under the reflection group");
  std::map<Exponent, Polynomial> memo;
  std::function<const Polynomial&(const Exponent&)> power = [&](const Exponent& e) -> const Polynomial& {
    auto it = memo.find(e);
    if (it != memo.end()) return it->second;
    std::size_t i = 0;
    while (i < e.size() && e[i] == 0) ++i;
    Polynomial v;
    if (i == e.size()) {
      v = f;
    } else {
      Exponent prev(e);
      prev[i] -= 1;
      v = sys.apply(i, power(prev));
    }
    return memo.emplace(e, std::move(v)).first->second;
  };
  Polynomial r(f.nvars(), common_field(f.field(), sigma.field()));
  for (auto& [e, c] : sigma.terms()) r += c * power(e);
  return r;
}

inline Polynomial apply_invariant_combination(const DunklContext& ctx, const Polynomial& sigma, const Polynomial& f) {
  return apply_invariant_combination(ctx.system, sigma, f);
}

// ---------------------------------------------------------------------------
// Deformed operators nabla_i^{+-} = nabla_i +- omega x_i and h_i = nabla_i^+ nabla_i^-.

namespace detail {

inline void require_classical(const DunklContext& ctx) {
  const char l = ctx.R->type.letter;
  if (l != 'A' && l != 'B' && l != 'D')
    throw RootSystemError("deformed operators are only provided for families A, B and D");
  if (!ctx.omega) throw RootSystemError("deformation parameter omega is not set");
}

}  // namespace detail

inline Polynomial apply_deformed(const DunklContext& ctx, int sign, std::size_t i, const Polynomial& f) {
  detail::require_classical(ctx);
  Polynomial xf = Polynomial::variable(f.nvars(), ctx.R->field, i) * f;
  FieldElement w = sign >= 0 ? *ctx.omega : -*ctx.omega;
  return ctx.system.apply(i, f) + w * xf;
}

inline Polynomial h_apply(const DunklContext& ctx, std::size_t i, const Polynomial& f) {
  return apply_deformed(ctx, +1, i, apply_deformed(ctx, -1, i, f));
}

inline Polynomial h_power(const DunklContext& ctx, std::size_t i, unsigned k, Polynomial f) {
  for (unsigned s = 0; s < k; ++s) f = h_apply(ctx, i, f);
  return f;
}

/// L_k f = sum_i h_i^k f.
inline Polynomial deformed_power_sum(const DunklContext& ctx, unsigned k, const Polynomial& f) {
  Polynomial r(f.nvars(), f.field());
  for (std::size_t i = 0; i < f.nvars(); ++i) r += h_power(ctx, i, k, f);
  return r;
}

/// [L_k, L_l] = 0 and [h_i^k, h_j^l] + [h_j^k, h_i^l] = 0 on monomials.
inline IdentityReport check_deformed_integrability(const DunklContext& ctx, unsigned k, unsigned l,
                                                   unsigned degree_bound) {
  detail::require_classical(ctx);
  IdentityReport rep;
  rep.context = ctx.describe() + " k=" + std::to_string(k) + " l=" + std::to_string(l);
  rep.degree_bound = degree_bound;
  const std::size_t n = ctx.R->dim;
  for (auto& e : monomials_up_to(n, degree_bound)) {
    Polynomial m = Polynomial::monomial(ctx.R->field, e);
    ++rep.identities_checked;
    Polynomial comm = deformed_power_sum(ctx, k, deformed_power_sum(ctx, l, m)) -
                      deformed_power_sum(ctx, l, deformed_power_sum(ctx, k, m));
    if (!comm.is_zero()) rep.violations.push_back("[L_k, L_l] " + exponent_string(e) + " = " + comm.to_string());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        ++rep.identities_checked;
        auto bracket = [&](std::size_t a, std::size_t b) {
          return h_power(ctx, a, k, h_power(ctx, b, l, m)) - h_power(ctx, b, l, h_power(ctx, a, k, m));
        };
        Polynomial anti = bracket(i, j) + bracket(j, i);
        if (!anti.is_zero())
          rep.violations.push_back("antisymmetry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") " +
                                   exponent_string(e) + " = " + anti.to_string());
      }
  }
  return rep;
}

namespace detail {

inline Matrix coordinate_reflection(FieldRef f, std::size_t n, std::size_t i, std::size_t j, bool plus) {
  Matrix m = identity_matrix(f, n);
  m[i][i] = FieldElement(f);
  m[j][j] = FieldElement(f);
  m[i][j] = FieldElement(f, plus ? -1 : 1);
  m[j][i] = FieldElement(f, plus ? -1 : 1);
  return m;
}

}  // namespace detail

/// [h_i, h_j] = 2 omega c (h_i - h_j) S_ij with S_ij = s_ij (family A) or
/// s_ij + s_ij^+ (families B, D), c the multiplicity of e_i - e_j.
inline IdentityReport check_h_commutator_relation(const DunklContext& ctx, unsigned degree_bound) {
  detail::require_classical(ctx);
  IdentityReport rep;
  rep.context = ctx.describe() + " [h_i,h_j] relation";
  rep.degree_bound = degree_bound;
  const RootSystem& R = *ctx.R;
  const std::size_t n = R.dim;
  auto idx = R.find_root(detail::evec(R.field, n, {{0, 1}, {1, -1}}));
  FieldElement c = ctx.c.numeric(R, *idx);
  FieldElement coeff = FieldElement(2) * *ctx.omega * c;
  for (auto& e : monomials_up_to(n, degree_bound)) {
    Polynomial m = Polynomial::monomial(R.field, e);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        ++rep.identities_checked;
        Polynomial lhs = h_apply(ctx, i, h_apply(ctx, j, m)) - h_apply(ctx, j, h_apply(ctx, i, m));
        Polynomial sm = m.compose_linear(detail::coordinate_reflection(R.field, n, i, j, false));
        if (R.type.letter != 'A') sm += m.compose_linear(detail::coordinate_reflection(R.field, n, i, j, true));
        Polynomial rhs = coeff * (h_apply(ctx, i, sm) - h_apply(ctx, j, sm));
        if (lhs != rhs)
          rep.violations.push_back("[h_" + std::to_string(i + 1) + ", h_" + std::to_string(j + 1) + "] on " +
                                   exponent_string(e));
      }
  }
  return rep;
}

/// [x_i, nabla_i] = -1 + c sum_{j != i} s_ij for the symmetric group.
inline IdentityReport check_x_nabla_relation(const DunklContext& ctx, unsigned degree_bound) {
  const RootSystem& R = *ctx.R;
  if (R.type.letter != 'A') throw RootSystemError("[x_i, nabla_i] relation is checked for family A only");
  IdentityReport rep;
  rep.context = ctx.describe() + " [x_i, nabla_i] relation";
  rep.degree_bound = degree_bound;
  const std::size_t n = R.dim;
  FieldElement c = ctx.c.numeric(R, 0);
  for (auto& e : monomials_up_to(n, degree_bound)) {
    Polynomial m = Polynomial::monomial(R.field, e);
    for (std::size_t i = 0; i < n; ++i) {
      ++rep.identities_checked;
      Polynomial xi = Polynomial::variable(n, R.field, i);
      Polynomial lhs = xi * ctx.system.apply(i, m) - ctx.system.apply(i, xi * m);
      Polynomial rhs = -m;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) rhs += c * m.compose_linear(detail::coordinate_reflection(R.field, n, std::min(i, j), std::max(i, j), false));
      if (lhs != rhs) rep.violations.push_back("[x_" + std::to_string(i + 1) + ", nabla] on " + exponent_string(e));
    }
  }
  return rep;
}

}  // namespace cherednik
