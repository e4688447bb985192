#pragma once

// Polynomial-level invariance test for ideals of unions of subspaces.
//
// A witness is a product of linear forms that vanishes on every subspace of
// an orbit. For such F and a subspace S of the orbit, only the reflections
// whose mirror contains S contribute to (nabla_i F)|S, and the restriction
// reduces to a scalar multiple of the product of the non-vanishing factors.
// The scalar is computed exactly, so no witness is ever expanded.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cherednik/dunkl.hpp"
#include "cherednik/linalg.hpp"
#include "cherednik/multipoly.hpp"

namespace cherednik {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default largest orbit accepted by direct tests.
inline constexpr std::size_t kDirectTestOrbitBound = 64;

struct RestrictedValue {
  bool zero = true;
  FieldElement coefficient;
  std::vector<Vector> factors;  // remaining factors, nonvanishing on S
};

/// (nabla_i F)|S for F = prod(forms), given that F vanishes on every subspace
/// of the orbit containing S.
inline RestrictedValue restricted_dunkl_value(const DunklSystem& sys, std::size_t i, const std::vector<Vector>& forms,
                                              const Subspace& S) {
  RestrictedValue out;
  std::size_t k0 = forms.size();
  std::size_t vanishing = 0;
  for (std::size_t k = 0; k < forms.size(); ++k)
    if (S.form_vanishes(forms[k])) {
      ++vanishing;
      k0 = k;
    }
  if (vanishing == 0) throw FieldError("witness does not vanish on the subspace");
  if (vanishing >= 2) return out;
  const Vector& ell = forms[k0];
  FieldElement coeff = ell[i];
  for (std::size_t h = 0; h < sys.reflections().size(); ++h) {
    const FieldElement& w = sys.weights()[h][i];
    if (w.is_zero()) continue;
    const Reflection& r = sys.reflections()[h];
    if (!S.form_vanishes(r.form)) continue;
    coeff -= w * dot(ell, r.displacement);
  }
  for (auto& ct : sys.cyclic_terms()) {
    if (ct.coord != i || ct.order < 2 || ct.t % ct.order != 1) continue;
    if (!S.form_vanishes(unit_vector(S.field(), ell.size(), i))) continue;
    coeff -= ct.weight * FieldElement(static_cast<long>(ct.order)) * ell[i];
  }
  out.coefficient = coeff;
  out.zero = coeff.is_zero();
  for (std::size_t k = 0; k < forms.size(); ++k)
    if (k != k0) out.factors.push_back(forms[k]);
  return out;
}

inline Polynomial product_of_forms(const std::vector<Vector>& forms, std::size_t n, FieldRef f) {
  Polynomial p = Polynomial::constant(n, field_one(f));
  for (auto& l : forms) p = p * Polynomial::linear_form(l, f);
  return p;
}

struct DirectTestReport {
  bool invariant = true;
  std::size_t orbit_size = 0;
  std::size_t witnesses = 0;
  std::size_t evaluations = 0;
  std::vector<std::string> escapes;

  nlohmann::json to_json() const {
    return {{"invariant", invariant},
            {"orbit_size", orbit_size},
            {"witnesses", witnesses},
            {"evaluations", evaluations},
            {"escapes", escapes}};
  }
};

/// Seeded form vanishing on S but not on pi.
inline Vector draw_separating_form(const Subspace& S, const Subspace& pi, std::mt19937_64& rng) {
  const Matrix& rows = S.annihilator();
  if (rows.empty()) throw FieldError("subspace has no annihilator");
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vector l = zero_vector(S.field(), S.ambient_dim());
    for (auto& r : rows) l = add(l, scale(r, FieldElement(coef(rng))));
    if (!is_zero_vector(l) && !pi.form_vanishes(l)) return l;
  }
  throw FieldError("could not separate a subspace from pi");
}

/// Witnesses (beta, x) * prod_{S != pi} L_S for each beta, with every Dunkl
/// operator evaluated on every subspace of the orbit.
inline DirectTestReport direct_invariance_test(const DunklSystem& sys, const Subspace& pi, const std::vector<Subspace>& orbit,
                                               const std::vector<Vector>& betas, std::size_t trials, std::uint64_t seed,
                                               std::size_t orbit_bound = kDirectTestOrbitBound) {
  if (orbit.size() > orbit_bound)
    throw InfeasibleError("orbit of size " + std::to_string(orbit.size()) + " exceeds the direct-test bound " +
                          std::to_string(orbit_bound));
  DirectTestReport rep;
  rep.orbit_size = orbit.size();
  std::mt19937_64 rng(seed);
  const std::string pi_key = pi.key();
  for (std::size_t trial = 0; trial < std::max<std::size_t>(trials, 1); ++trial) {
    std::vector<Vector> separating;
    for (auto& S : orbit)
      if (S.key() != pi_key) separating.push_back(draw_separating_form(S, pi, rng));
    for (std::size_t b = 0; b < betas.size(); ++b) {
      std::vector<Vector> forms{betas[b]};
      forms.insert(forms.end(), separating.begin(), separating.end());
      ++rep.witnesses;
      for (std::size_t s = 0; s < orbit.size(); ++s)
        for (std::size_t i = 0; i < sys.nvars(); ++i) {
          ++rep.evaluations;
          auto v = restricted_dunkl_value(sys, i, forms, orbit[s]);
          if (v.zero) continue;
          rep.invariant = false;
          if (rep.escapes.size() < 8)
            rep.escapes.push_back("nabla_" + std::to_string(i + 1) + " W" + std::to_string(b + 1) + " on subspace " +
                                  std::to_string(s) + ": leading factor " + v.coefficient.to_string());
        }
    }
  }
  return rep;
}

}  // namespace cherednik
