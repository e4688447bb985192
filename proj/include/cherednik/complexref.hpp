#pragma once

// The complex reflection group G(m,p,N): generators, Dunkl operators with the
// cyclic terms of the diagonal reflections, and invariance of the ideals of
// its block strata, decided both by witnesses and by closed-form conditions.
//
// Group elements act on polynomials by substitution: s_ij^k sends x_i to
// xi^k x_j and x_j to xi^{-k} x_i, tau_i sends x_i to eta x_i, with
// xi = exp(2 pi i/m) and eta = xi^p.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cherednik/dunkl.hpp"
#include "cherednik/linalg.hpp"
#include "cherednik/rootsys.hpp"
#include "cherednik/witness.hpp"

namespace cherednik {

class ComplexReflectionGroup {
 public:
  ComplexReflectionGroup(long m, long p, long N) : m_(m), p_(p), N_(N) {
    if (m < 1 || p < 1 || N < 1) throw RootSystemError("G(m,p,N) needs positive m, p, N");
    if (m % p != 0) throw RootSystemError("G(m,p,N) needs p | m");
    field_ = m >= 3 ? cyclotomic_field(m) : rational_field();
    const auto n = static_cast<std::size_t>(N);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (long k = 0; k < m; ++k) {
          Matrix s = swap_matrix(i, j, k);
          generators_.push_back(s);
          inverses_.push_back(s);
        }
    if (order() > 1)
      for (std::size_t i = 0; i < n; ++i) {
        generators_.push_back(tau_matrix(i, 1));
        inverses_.push_back(tau_matrix(i, -1));
      }
  }

  long m() const { return m_; }
  long p() const { return p_; }
  long N() const { return N_; }
  std::size_t n() const { return static_cast<std::size_t>(N_); }
  /// Order m/p of the diagonal reflections.
  long order() const { return m_ / p_; }
  FieldRef field() const { return field_; }
  std::string name() const {
    return "G(" + std::to_string(m_) + "," + std::to_string(p_) + "," + std::to_string(N_) + ")";
  }

  /// xi^k.
  FieldElement xi(long k) const {
    long e = ((k % m_) + m_) % m_;
    if (m_ >= 3) return FieldElement::root_of_unity(field_, e);
    return FieldElement(field_, (m_ == 2 && e == 1) ? -1 : 1);
  }
  FieldElement eta(long s) const { return xi(p_ * s); }

  /// Substitution x_i -> xi^k x_j, x_j -> xi^{-k} x_i.
  Matrix swap_matrix(std::size_t i, std::size_t j, long k) const {
    Matrix a = identity_matrix(field_, n());
    a[i][i] = FieldElement(field_);
    a[j][j] = FieldElement(field_);
    a[i][j] = xi(k);
    a[j][i] = xi(-k);
    return a;
  }
  /// Substitution x_i -> eta^s x_i.
  Matrix tau_matrix(std::size_t i, long s) const {
    Matrix a = identity_matrix(field_, n());
    a[i][i] = eta(s);
    return a;
  }
  /// Linear form x_i - xi^k x_j.
  Vector mirror(std::size_t i, std::size_t j, long k) const {
    Vector v = zero_vector(field_, n());
    v[i] = FieldElement(field_, 1);
    v[j] = -xi(k);
    return v;
  }

  const std::vector<Matrix>& generators() const { return generators_; }
  const std::vector<Matrix>& inverses() const { return inverses_; }

 private:
  long m_, p_, N_;
  FieldRef field_ = rational_field();
  std::vector<Matrix> generators_, inverses_;
};

struct ComplexMultiplicities {
  FieldElement c0;
  std::optional<FieldElement> c0_tilde;  // odd-k reflections, N = 2 with p even
  std::vector<FieldElement> c;           // c_1, ..., c_{m/p - 1}

  FieldElement ct(long t) const {
    if (t < 1 || static_cast<std::size_t>(t) > c.size()) return FieldElement(0);
    return c[static_cast<std::size_t>(t - 1)];
  }
  FieldElement c1() const { return ct(1); }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["c0"] = c0.to_string();
    if (c0_tilde) j["c0_tilde"] = c0_tilde->to_string();
    for (std::size_t t = 0; t < c.size(); ++t) j["c" + std::to_string(t + 1)] = c[t].to_string();
    return j;
  }
};

inline void check_multiplicities(const ComplexReflectionGroup& G, const ComplexMultiplicities& mult) {
  if (mult.c.size() + 1 > static_cast<std::size_t>(G.order()))
    throw RootSystemError(G.name() + " has only " + std::to_string(G.order() - 1) + " cyclic parameters");
  if (mult.c0_tilde && (G.N() != 2 || G.p() % 2 != 0))
    throw RootSystemError("a separate odd-reflection parameter needs N = 2 and p even");
}

/// nabla_i = d_i - c0 sum_{j != i} sum_k (1 - s_ij^k)/(x_i - xi^k x_j)
///           - sum_t c_t sum_s eta^{-st} tau_i^s / x_i.
/// With c0_tilde set, odd k use c0_tilde.
inline DunklSystem make_complex_dunkl(const ComplexReflectionGroup& G, const ComplexMultiplicities& mult) {
  check_multiplicities(G, mult);
  FieldRef f = G.field();
  DunklSystem sys(G.n(), f, G.name());
  for (std::size_t i = 0; i < G.n(); ++i)
    for (std::size_t j = i + 1; j < G.n(); ++j)
      for (long k = 0; k < G.m(); ++k) {
        FieldElement c = (mult.c0_tilde && k % 2 == 1) ? *mult.c0_tilde : mult.c0;
        Vector w = zero_vector(f, G.n());
        w[i] = c.embed(f);
        w[j] = -(c.embed(f) * G.xi(k));
        sys.add_reflection(make_reflection(G.swap_matrix(i, j, k), G.mirror(i, j, k)), w);
      }
  const long d = G.order();
  for (std::size_t i = 0; i < G.n(); ++i)
    for (long t = 1; t < d; ++t) {
      FieldElement c = mult.ct(t);
      if (c.is_zero()) continue;
      sys.add_cyclic({i, c.embed(f), static_cast<unsigned>(d), static_cast<unsigned>(t)});
    }
  sys.set_generators(G.generators());
  return sys;
}

/// (s_ij^k)^2 = 1 and tau_i^{m/p} = 1 as matrices; every s_ij^k fixes its mirror.
inline IdentityReport check_group_relations(const ComplexReflectionGroup& G) {
  IdentityReport rep;
  rep.context = G.name() + " relations";
  Matrix one = identity_matrix(G.field(), G.n());
  for (std::size_t i = 0; i < G.n(); ++i) {
    Matrix t = one;
    for (long s = 0; s < G.order(); ++s) t = matmul(t, G.tau_matrix(i, 1));
    ++rep.identities_checked;
    if (t != one) rep.violations.push_back("tau_" + std::to_string(i + 1) + " has the wrong order");
    for (std::size_t j = i + 1; j < G.n(); ++j)
      for (long k = 0; k < G.m(); ++k) {
        Matrix s = G.swap_matrix(i, j, k);
        ++rep.identities_checked;
        if (matmul(s, s) != one)
          rep.violations.push_back("s_" + std::to_string(i + 1) + std::to_string(j + 1) + "^" + std::to_string(k) +
                                   " is not an involution");
        Polynomial L = Polynomial::linear_form(G.mirror(i, j, k), G.field());
        ++rep.identities_checked;
        if (L.compose_linear(s) != FieldElement(-1) * L)
          rep.violations.push_back("s_" + std::to_string(i + 1) + std::to_string(j + 1) + "^" + std::to_string(k) +
                                   " does not negate its mirror form");
      }
  }
  return rep;
}

/// G(2,1,N) against B_N with c0 = c(e_i +- e_j) and c1 = c(e_i), on all
/// monomials of degree <= degree_bound.
inline IdentityReport compare_with_bn(long N, const FieldElement& c_long, const FieldElement& c_short,
                                      unsigned degree_bound) {
  ComplexReflectionGroup G(2, 1, N);
  ComplexMultiplicities mult{c_long, std::nullopt, {c_short}};
  DunklSystem sys = make_complex_dunkl(G, mult);
  RootSystem R = build_root_system("B", static_cast<int>(N));
  MultiplicityFunction c;
  c.by_label = {{"c1", LinearExpr(c_long)}, {"c2", LinearExpr(c_short)}};
  DunklContext ctx = make_dunkl_context(R, c);
  IdentityReport rep;
  rep.context = "G(2,1," + std::to_string(N) + ") vs B" + std::to_string(N);
  rep.degree_bound = degree_bound;
  for (auto& e : monomials_up_to(G.n(), degree_bound))
    for (std::size_t i = 0; i < G.n(); ++i) {
      ++rep.identities_checked;
      Polynomial a = sys.apply_monomial(i, e);
      Polynomial b = ctx.system.apply_monomial(i, e);
      if (a != b) rep.violations.push_back("nabla_" + std::to_string(i + 1) + " " + exponent_string(e) + ": " +
                                           a.to_string() + " vs " + b.to_string());
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Strata

/// q blocks of r equal coordinates, the last block twisted by eps = xi^eps_power,
/// followed by l zero coordinates.
inline Subspace block_subspace(const ComplexReflectionGroup& G, long q, long r, long l, long eps_power = 0) {
  if (q < 0 || l < 0 || (q > 0 && r < 2)) throw ParseError("invalid block parameters");
  if (q * r + l > G.N()) throw ParseError("blocks do not fit in " + std::to_string(G.N()) + " coordinates");
  if (eps_power % G.m() != 0 && q * r != G.N()) throw ParseError("a twisted last block needs qr = N");
  Matrix forms;
  for (long b = 0; b < q; ++b)
    for (long a = b * r; a + 1 < (b + 1) * r; ++a) {
      Vector v = zero_vector(G.field(), G.n());
      v[static_cast<std::size_t>(a)] = (b == q - 1 && a == b * r) ? G.xi(eps_power) : FieldElement(G.field(), 1);
      v[static_cast<std::size_t>(a + 1)] = FieldElement(G.field(), -1);
      forms.push_back(v);
    }
  for (long a = q * r; a < q * r + l; ++a) forms.push_back(unit_vector(G.field(), G.n(), static_cast<std::size_t>(a)));
  return Subspace::from_annihilator(std::move(forms), G.n(), G.field());
}

/// Witness test of the ideal of the G-orbit of pi.
inline DirectTestReport complex_direct_test(const ComplexReflectionGroup& G, const DunklSystem& sys, const Subspace& pi,
                                            std::uint64_t seed = 1, std::size_t orbit_bound = kDirectTestOrbitBound) {
  std::vector<Subspace> orbit;
  try {
    orbit = orbit_of_subspace(pi, G.generators(), G.inverses(), orbit_bound + 1);
  } catch (const OrbitCapExceeded&) {
    throw InfeasibleError("orbit exceeds the direct-test bound " + std::to_string(orbit_bound));
  }
  return direct_invariance_test(sys, pi, orbit, pi.annihilator(), 1, seed, orbit_bound);
}

struct ComplexVerdict {
  std::string group;
  long m = 0, p = 0, N = 0;
  std::string ideal;
  std::string condition;
  ComplexMultiplicities parameters;
  bool closed_form = false;
  DirectTestReport direct;

  bool invariant() const { return direct.invariant; }
  bool agrees() const { return direct.invariant == closed_form; }
  nlohmann::json to_json() const {
    return {{"group", group},
            {"m", m},
            {"p", p},
            {"N", N},
            {"ideal", ideal},
            {"condition", condition},
            {"parameters", parameters.to_json()},
            {"closed_form", closed_form},
            {"invariant", direct.invariant},
            {"agrees", agrees()},
            {"direct", direct.to_json()}};
  }
};

namespace detail {

inline ComplexVerdict complex_verdict(const ComplexReflectionGroup& G, const ComplexMultiplicities& mult,
                                      const Subspace& pi, std::string ideal, std::string condition, bool closed,
                                      std::uint64_t seed, std::size_t orbit_bound) {
  ComplexVerdict v;
  v.group = G.name();
  v.m = G.m();
  v.p = G.p();
  v.N = G.N();
  v.ideal = std::move(ideal);
  v.condition = std::move(condition);
  v.parameters = mult;
  v.closed_form = closed;
  v.direct = complex_direct_test(G, make_complex_dunkl(G, mult), pi, seed, orbit_bound);
  return v;
}

inline void require_general(const ComplexMultiplicities& mult) {
  if (mult.c0_tilde) throw RootSystemError("this ideal uses the single reflection parameter c0");
}

inline FieldElement q_frac(long a, long b) { return FieldElement(mpq_class(a, b)); }

}  // namespace detail

/// Ideal of the orbit of q blocks of size r (last block twisted by eps).
/// Invariant iff c0 = 1/r.
inline ComplexVerdict invariance_qr(const ComplexReflectionGroup& G, const ComplexMultiplicities& mult, long q, long r,
                                    long eps_power = 0, std::uint64_t seed = 1,
                                    std::size_t orbit_bound = kDirectTestOrbitBound) {
  detail::require_general(mult);
  if (q < 1) throw ParseError("q must be at least 1");
  Subspace pi = block_subspace(G, q, r, 0, eps_power);
  std::string ideal = "I_{" + std::to_string(q) + "," + std::to_string(r) + "}";
  if (eps_power % G.m() != 0) ideal += "^(xi^" + std::to_string(eps_power) + ")";
  bool closed = mult.c0 == detail::q_frac(1, r);
  return detail::complex_verdict(G, mult, pi, ideal, "c0 = 1/" + std::to_string(r), closed, seed, orbit_bound);
}

/// Condition of the zero block of size l: c0 = 1/(m(l-1)) when p = m,
/// otherwise (l-1)c0 + c1/p = 1/m.
inline bool zero_block_condition(const ComplexReflectionGroup& G, const ComplexMultiplicities& mult, long l) {
  FieldElement lhs = FieldElement(l - 1) * mult.c0 + mult.c1() / FieldElement(G.p());
  return lhs == detail::q_frac(1, G.m());
}

inline std::string zero_block_condition_text(const ComplexReflectionGroup& G, long l) {
  if (G.p() == G.m()) return "c0 = " + detail::q_frac(1, G.m() * (l - 1)).to_string();
  std::string a = l == 2 ? "c0" : std::to_string(l - 1) + "*c0";
  if (l == 1) a.clear();
  std::string b = "c1/" + std::to_string(G.p());
  return (a.empty() ? b : a + " + " + b) + " = 1/" + std::to_string(G.m());
}

/// Ideal of the union of coordinate subspaces of codimension l.
inline ComplexVerdict invariance_l(const ComplexReflectionGroup& G, const ComplexMultiplicities& mult, long l,
                                   std::uint64_t seed = 1, std::size_t orbit_bound = kDirectTestOrbitBound) {
  detail::require_general(mult);
  if (l < 1 || l > G.N()) throw ParseError("l must lie in 1..N");
  if (G.p() == G.m() && l < 2) throw ParseError("G(m,m,N) needs l >= 2");
  Subspace pi = block_subspace(G, 0, 0, l);
  return detail::complex_verdict(G, mult, pi, "I_" + std::to_string(l), zero_block_condition_text(G, l),
                                 zero_block_condition(G, mult, l), seed, orbit_bound);
}

/// q blocks of size r followed by l zero coordinates.
inline ComplexVerdict invariance_combined(const ComplexReflectionGroup& G, const ComplexMultiplicities& mult, long q,
                                          long r, long l, std::uint64_t seed = 1,
                                          std::size_t orbit_bound = kDirectTestOrbitBound) {
  detail::require_general(mult);
  if (q < 1 || r < 2 || l < 1 || q * r + l > G.N()) throw ParseError("combined stratum needs r > 1, l >= 1, qr + l <= N");
  Subspace pi = block_subspace(G, q, r, l);
  bool closed = mult.c0 == detail::q_frac(1, r) && zero_block_condition(G, mult, l);
  std::string ideal = "I_{" + std::to_string(q) + "," + std::to_string(r) + "," + std::to_string(l) + "}";
  std::string cond = "c0 = 1/" + std::to_string(r) + ", " + zero_block_condition_text(G, l);
  return detail::complex_verdict(G, mult, pi, ideal, cond, closed, seed, orbit_bound);
}

/// The four ideals of G(m,p,2) with p even, where even and odd reflections
/// s_12^k carry separate parameters c0 and c0_tilde:
///   I1: x1 = xi^{2k} x2,  I2: x1 = xi^{2k+1} x2,  I3: x1 x2 = 0,  I4: x1 = x2 = 0.
inline std::vector<ComplexVerdict> invariance_n2_even(long m, long p, const ComplexMultiplicities& mult,
                                                      std::uint64_t seed = 1) {
  if (p % 2 != 0) throw RootSystemError("the refined rank-two case needs p even");
  ComplexReflectionGroup G(m, p, 2);
  ComplexMultiplicities full = mult;
  if (!full.c0_tilde) full.c0_tilde = full.c0;
  FieldRef f = G.field();
  auto plane = [&](std::initializer_list<Vector> forms) { return Subspace::from_annihilator(Matrix(forms), 2, f); };
  const FieldElement half = detail::q_frac(1, 2);
  const FieldElement ct0 = *full.c0_tilde;
  std::vector<ComplexVerdict> out;
  out.push_back(detail::complex_verdict(G, full, plane({G.mirror(0, 1, 0)}), "I1", "c0 = 1/2", full.c0 == half, seed,
                                        kDirectTestOrbitBound));
  out.push_back(detail::complex_verdict(G, full, plane({G.mirror(0, 1, 1)}), "I2", "c0_tilde = 1/2", ct0 == half,
                                        seed, kDirectTestOrbitBound));
  out.push_back(detail::complex_verdict(G, full, plane({unit_vector(f, 2, 0)}), "I3",
                                        "c1 = " + detail::q_frac(p, m).to_string(), full.c1() == detail::q_frac(p, m),
                                        seed, kDirectTestOrbitBound));
  FieldElement i4 = half * (full.c0 + ct0) + full.c1() / FieldElement(p);
  out.push_back(detail::complex_verdict(G, full, plane({unit_vector(f, 2, 0), unit_vector(f, 2, 1)}), "I4",
                                        "(c0 + c0_tilde)/2 + c1/" + std::to_string(p) + " = 1/" + std::to_string(m),
                                        i4 == detail::q_frac(1, m), seed, kDirectTestOrbitBound));
  return out;
}

}  // namespace cherednik
