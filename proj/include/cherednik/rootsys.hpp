#pragma once

// Finite Coxeter root systems, parabolic subgraphs, subspace orbits (strata)
// and generalized Coxeter numbers.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cherednik/exactfield.hpp"
#include "cherednik/linalg.hpp"
#include "cherednik/linexpr.hpp"
#include "cherednik/multipoly.hpp"

namespace cherednik {

class RootSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OrbitCapExceeded : public std::runtime_error {
 public:
  explicit OrbitCapExceeded(std::size_t cap)
      : std::runtime_error("orbit size cap of " + std::to_string(cap) + " subspaces exceeded"), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

// ---------------------------------------------------------------------------
// Coxeter types

struct CoxeterComponent {
  char letter = 'A';
  int rank = 1;
  int m = 0;  // dihedral order for I2(m)

  std::string name() const {
    if (letter == 'I') return "I2(" + std::to_string(m) + ")";
    return std::string(1, letter) + std::to_string(rank);
  }
  int coxeter_number() const {
    switch (letter) {
      case 'A': return rank + 1;
      case 'B': return 2 * rank;
      case 'D': return 2 * rank - 2;
      case 'E': return rank == 6 ? 12 : rank == 7 ? 18 : 30;
      case 'F': return 12;
      case 'G': return 6;
      case 'H': return rank == 3 ? 10 : rank == 4 ? 30 : 5;
      case 'I': return m;
    }
    return 0;
  }
  auto order_key() const { return std::make_tuple(letter, rank, m); }
  friend bool operator<(const CoxeterComponent& a, const CoxeterComponent& b) { return a.order_key() < b.order_key(); }
  friend bool operator==(const CoxeterComponent& a, const CoxeterComponent& b) { return a.order_key() == b.order_key(); }
};

/// Normalizes rank-2 aliases: I2(3) = A2, I2(4) = B2, I2(6) = G2, H2 = I2(5).
inline CoxeterComponent normalize_component(CoxeterComponent c) {
  if (c.letter == 'I') {
    if (c.m == 3) return {'A', 2, 0};
    if (c.m == 4) return {'B', 2, 0};
    if (c.m == 6) return {'G', 2, 0};
  }
  if (c.letter == 'H' && c.rank == 2) return {'I', 2, 5};
  if (c.letter == 'C') c.letter = 'B';
  if (c.letter == 'B' && c.rank == 1) return {'A', 1, 0};
  return c;
}

using CoxeterType = std::vector<CoxeterComponent>;  // sorted

inline std::string type_string(CoxeterType t) {
  if (t.empty()) return "none";
  std::sort(t.begin(), t.end());
  std::string s;
  for (std::size_t i = 0; i < t.size();) {
    std::size_t j = i;
    while (j < t.size() && t[j] == t[i]) ++j;
    s += t[i].name();
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

/// Parses "A1^3", "A1A1", "A1xA2", "I2(5)", "E6". Returns nullopt if the text
/// is not a type string.
inline std::optional<CoxeterType> parse_type_string(const std::string& text) {
  CoxeterType t;
  std::size_t i = 0;
  auto digits = [&](int& out) {
    std::size_t st = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (st == i) return false;
    out = std::stoi(text.substr(st, i - st));
    return true;
  };
  if (text == "none" || text.empty()) return t;
  while (i < text.size()) {
    if (text[i] == 'x' || text[i] == '*' || text[i] == ' ') {
      ++i;
      continue;
    }
    CoxeterComponent c;
    c.letter = text[i];
    if (std::string("ABCDEFGHI").find(c.letter) == std::string::npos) return std::nullopt;
    ++i;
    if (!digits(c.rank)) return std::nullopt;
    if (c.letter == 'I') {
      if (i >= text.size() || text[i] != '(') return std::nullopt;
      ++i;
      if (!digits(c.m) || i >= text.size() || text[i] != ')') return std::nullopt;
      ++i;
    }
    int power = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      if (!digits(power)) return std::nullopt;
    }
    c = normalize_component(c);
    for (int k = 0; k < power; ++k) t.push_back(c);
  }
  std::sort(t.begin(), t.end());
  return t;
}

// ---------------------------------------------------------------------------
// Root systems

struct RootSystem {
  std::string family;  // "A3", "E8", "I2(5)"
  CoxeterComponent type;
  std::size_t dim = 0;
  FieldRef field = rational_field();
  std::vector<Vector> simple_roots;
  std::vector<Vector> positive_roots;
  std::vector<Vector> simple_coordinates;  // of each positive root
  std::vector<std::size_t> orbit_of_root;  // index into orbit_labels
  std::vector<std::string> orbit_labels;
  std::vector<Matrix> simple_reflections;
  std::vector<Matrix> root_reflections;  // per positive root
  std::vector<std::vector<int>> coxeter_matrix;

  std::size_t rank() const { return simple_roots.size(); }
  std::size_t num_positive() const { return positive_roots.size(); }
  const std::string& label_of_root(std::size_t r) const { return orbit_labels[orbit_of_root[r]]; }

  /// Index of the positive root proportional to v, or nullopt.
  std::optional<std::size_t> find_root(const Vector& v) const {
    for (std::size_t r = 0; r < positive_roots.size(); ++r) {
      const auto& a = positive_roots[r];
      FieldElement ratio;
      bool ok = true, have = false;
      for (std::size_t i = 0; i < dim && ok; ++i) {
        if (a[i].is_zero() != v[i].is_zero()) ok = false;
        if (!ok || a[i].is_zero()) continue;
        FieldElement q = v[i] / a[i];
        if (!have) {
          ratio = q;
          have = true;
        } else if (q != ratio) {
          ok = false;
        }
      }
      if (ok && have) return r;
    }
    return std::nullopt;
  }
};

namespace detail {

inline Vector qvec(FieldRef f, std::initializer_list<mpq_class> xs) {
  Vector v;
  for (auto& x : xs) v.emplace_back(f, x);
  return v;
}

inline Vector evec(FieldRef f, std::size_t n, std::initializer_list<std::pair<std::size_t, long>> entries) {
  Vector v = zero_vector(f, n);
  for (auto& [i, c] : entries) v[i] = FieldElement(f, c);
  return v;
}

inline std::string vector_key(const Vector& v) {
  std::string k;
  for (auto& x : v) {
    k += x.key();
    k += ';';
  }
  return k;
}

inline Vector reflect(const Vector& beta, const Vector& alpha, const FieldElement& alpha_norm) {
  FieldElement s = FieldElement(2) * dot(beta, alpha) / alpha_norm;
  if (s.is_zero()) return beta;
  return sub(beta, scale(alpha, s));
}

inline int coxeter_order_from_cos2(const FieldElement& c2, FieldRef f) {
  if (c2.is_rational()) {
    mpq_class q = c2.rational_value();
    if (q == 0) return 2;
    if (q == mpq_class(1, 4)) return 3;
    if (q == mpq_class(1, 2)) return 4;
    if (q == mpq_class(3, 4)) return 6;
  }
  if (f->kind() == FieldKind::quadratic) {
    const long d = f->parameter();
    FieldElement g = FieldElement::generator(f);
    if (d == 5 && c2 == (FieldElement(f, 3) + g) / FieldElement(f, 8)) return 5;
    if (d == 2 && c2 == (FieldElement(f, 2) + g) / FieldElement(f, 4)) return 8;
    if (d == 3 && c2 == (FieldElement(f, 2) + g) / FieldElement(f, 4)) return 12;
  }
  throw RootSystemError("unrecognized angle between simple roots (cos^2 = " + c2.to_string() + ")");
}

}  // namespace detail

/// Splits a subset of simple-root indices into connected components of the
/// Coxeter graph.
inline std::vector<std::vector<std::size_t>> graph_components(const RootSystem& R, const std::vector<std::size_t>& nodes) {
  std::vector<std::vector<std::size_t>> comps;
  std::set<std::size_t> left(nodes.begin(), nodes.end());
  while (!left.empty()) {
    std::vector<std::size_t> comp{*left.begin()};
    left.erase(left.begin());
    for (std::size_t k = 0; k < comp.size(); ++k)
      for (auto it = left.begin(); it != left.end();) {
        if (R.coxeter_matrix[comp[k]][*it] >= 3) {
          comp.push_back(*it);
          it = left.erase(it);
        } else {
          ++it;
        }
      }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end());
  return comps;
}

/// Coxeter type of a connected set of simple roots.
inline CoxeterComponent classify_component(const RootSystem& R, const std::vector<std::size_t>& comp) {
  const std::size_t k = comp.size();
  if (k == 1) return {'A', 1, 0};
  auto m = [&](std::size_t a, std::size_t b) { return R.coxeter_matrix[comp[a]][comp[b]]; };
  std::vector<std::vector<std::size_t>> adj(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (a != b && m(a, b) >= 3) adj[a].push_back(b);
  std::size_t edges = 0;
  for (auto& v : adj) edges += v.size();
  edges /= 2;
  if (edges != k - 1) throw RootSystemError("Coxeter subgraph contains a cycle");
  std::size_t branch = k;
  for (std::size_t a = 0; a < k; ++a) {
    if (adj[a].size() > 3) throw RootSystemError("unsupported Coxeter subgraph");
    if (adj[a].size() == 3) branch = a;
  }
  if (branch != k) {
    std::vector<int> arms;
    for (std::size_t start : adj[branch]) {
      int len = 0;
      std::size_t prev = branch, cur = start;
      while (true) {
        if (m(prev, cur) != 3) throw RootSystemError("unsupported branched subgraph");
        ++len;
        std::size_t next = k;
        for (auto nb : adj[cur])
          if (nb != prev) next = nb;
        if (next == k) break;
        prev = cur;
        cur = next;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return {'D', static_cast<int>(k), 0};
    if (arms[0] == 1 && arms[1] == 2 && arms[2] <= 4) return {'E', static_cast<int>(k), 0};
    throw RootSystemError("unsupported branched subgraph");
  }
  // Path: walk from an end.
  std::size_t end = 0;
  while (adj[end].size() != 1) ++end;
  std::vector<int> labels;
  std::size_t prev = k, cur = end;
  for (std::size_t step = 0; step + 1 < k; ++step) {
    std::size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    labels.push_back(m(cur, next));
    prev = cur;
    cur = next;
  }
  int big = 0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] > 3) {
      if (big) throw RootSystemError("unsupported Coxeter subgraph");
      big = labels[i];
      pos = i;
    }
  if (!big) return {'A', static_cast<int>(k), 0};
  if (k == 2) return normalize_component({'I', 2, big});
  const bool at_end = pos == 0 || pos + 1 == labels.size();
  if (big == 4 && at_end) return {'B', static_cast<int>(k), 0};
  if (big == 4 && k == 4) return {'F', 4, 0};
  if (big == 5 && at_end && k <= 4) return {'H', static_cast<int>(k), 0};
  throw RootSystemError("unsupported Coxeter subgraph");
}

inline CoxeterType classify_subgraph(const RootSystem& R, const std::vector<std::size_t>& nodes) {
  CoxeterType t;
  for (auto& c : graph_components(R, nodes)) t.push_back(classify_component(R, c));
  std::sort(t.begin(), t.end());
  return t;
}

namespace detail {

inline void finish_root_system(RootSystem& R) {
  const std::size_t r = R.simple_roots.size();
  const std::size_t n = R.dim;
  FieldRef f = R.field;
  std::vector<FieldElement> norms;
  for (auto& a : R.simple_roots) norms.push_back(dot(a, a));
  for (auto& a : R.simple_roots) R.simple_reflections.push_back(reflection_matrix(a));

  R.coxeter_matrix.assign(r, std::vector<int>(r, 1));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      if (i == j) continue;
      FieldElement ip = dot(R.simple_roots[i], R.simple_roots[j]);
      R.coxeter_matrix[i][j] = coxeter_order_from_cos2(ip * ip / (norms[i] * norms[j]), f);
    }

  // Positive roots as the closure of the simple roots under simple reflections.
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> parent;
  for (std::size_t i = 0; i < r; ++i) {
    index.emplace(vector_key(R.simple_roots[i]), i);
    R.positive_roots.push_back(R.simple_roots[i]);
    R.simple_coordinates.push_back(unit_vector(f, r, i));
    parent.push_back(i);
  }
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t q = 0; q < R.positive_roots.size(); ++q) {
    for (std::size_t i = 0; i < r; ++i) {
      if (q == i) continue;
      const Vector beta = R.positive_roots[q];
      FieldElement s = FieldElement(2) * dot(beta, R.simple_roots[i]) / norms[i];
      if (s.is_zero()) continue;
      Vector gamma = sub(beta, scale(R.simple_roots[i], s));
      auto key = vector_key(gamma);
      auto it = index.find(key);
      std::size_t g;
      if (it == index.end()) {
        g = R.positive_roots.size();
        index.emplace(key, g);
        R.positive_roots.push_back(gamma);
        Vector coords = R.simple_coordinates[q];
        coords[i] -= s;
        R.simple_coordinates.push_back(coords);
        parent.push_back(g);
      } else {
        g = it->second;
      }
      std::size_t a = find(q), b = find(g);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  for (auto& a : R.positive_roots) R.root_reflections.push_back(reflection_matrix(a));

  // Orbit labels.
  std::map<std::size_t, std::size_t> orbit_index;
  for (std::size_t q = 0; q < R.positive_roots.size(); ++q) {
    std::size_t root = find(q);
    if (!orbit_index.count(root)) orbit_index.emplace(root, orbit_index.size());
    R.orbit_of_root.push_back(orbit_index[root]);
  }
  const std::size_t orbits = orbit_index.size();
  if (orbits == 1) {
    R.orbit_labels = {"c"};
  } else if (orbits == 2) {
    R.orbit_labels.assign(2, "");
    if (R.type.letter == 'I') {
      R.orbit_labels[R.orbit_of_root[0]] = "c1";
      R.orbit_labels[R.orbit_of_root[1]] = "c2";
    } else {
      // Longer roots carry c1, shorter ones c2.
      std::vector<FieldElement> len(2);
      for (std::size_t q = 0; q < R.positive_roots.size(); ++q)
        len[R.orbit_of_root[q]] = dot(R.positive_roots[q], R.positive_roots[q]);
      bool first_longer = (len[0] - len[1]).approximate().first > 0;
      R.orbit_labels[0] = first_longer ? "c1" : "c2";
      R.orbit_labels[1] = first_longer ? "c2" : "c1";
    }
  } else {
    throw RootSystemError("unexpected number of root orbits");
  }
  (void)n;
}

}  // namespace detail

/// Closure check: s_alpha(beta) is (up to sign) a positive root for all pairs.
inline bool verify_reflection_closure(const RootSystem& R) {
  std::unordered_set<std::string> keys;
  for (auto& a : R.positive_roots) {
    keys.insert(detail::vector_key(a));
    keys.insert(detail::vector_key(scale(a, FieldElement(-1))));
  }
  for (auto& a : R.positive_roots) {
    FieldElement na = dot(a, a);
    for (auto& b : R.positive_roots)
      if (!keys.count(detail::vector_key(detail::reflect(b, a, na)))) return false;
  }
  return true;
}

inline std::size_t expected_positive_count(const CoxeterComponent& t) {
  const std::size_t n = static_cast<std::size_t>(t.rank);
  switch (t.letter) {
    case 'A': return n * (n + 1) / 2;
    case 'B': return n * n;
    case 'D': return n * (n - 1);
    case 'E': return n == 6 ? 36 : n == 7 ? 63 : 120;
    case 'F': return 24;
    case 'G': return 6;
    case 'H': return n == 3 ? 15 : 60;
    case 'I': return static_cast<std::size_t>(t.m);
  }
  return 0;
}

/// Builds a root system from a family name such as "A3", "B4", "E8", "F4",
/// "G2", "H3", "I2(5)"; `rank` fills in a bare "A", "B" or "D".
inline RootSystem build_root_system(std::string family, int rank = 0) {
  if (family.size() == 1 && rank > 0) family += std::to_string(rank);
  auto parsed = parse_type_string(family);
  if (!parsed || parsed->size() != 1) throw RootSystemError("unknown root system family '" + family + "'");
  CoxeterComponent t = (*parsed)[0];
  if (t.letter == 'D' && t.rank < 2) throw RootSystemError("D_n needs n >= 2");
  RootSystem R;
  R.type = t;
  R.family = t.name();
  FieldRef Q = rational_field();
  using detail::evec;
  using detail::qvec;
  const mpq_class h(1, 2);
  switch (t.letter) {
    case 'A': {
      R.dim = t.rank + 1;
      R.field = Q;
      for (int i = 0; i < t.rank; ++i) R.simple_roots.push_back(evec(Q, R.dim, {{i, 1}, {i + 1, -1}}));
      break;
    }
    case 'B': {
      R.dim = t.rank;
      R.field = Q;
      for (int i = 0; i + 1 < t.rank; ++i) R.simple_roots.push_back(evec(Q, R.dim, {{i, 1}, {i + 1, -1}}));
      R.simple_roots.push_back(evec(Q, R.dim, {{t.rank - 1, 1}}));
      break;
    }
    case 'D': {
      R.dim = t.rank;
      R.field = Q;
      for (int i = 0; i + 1 < t.rank; ++i) R.simple_roots.push_back(evec(Q, R.dim, {{i, 1}, {i + 1, -1}}));
      R.simple_roots.push_back(evec(Q, R.dim, {{t.rank - 2, 1}, {t.rank - 1, 1}}));
      break;
    }
    case 'E': {
      R.dim = 8;
      R.field = Q;
      std::vector<Vector> e8{qvec(Q, {h, -h, -h, -h, -h, -h, -h, h}), evec(Q, 8, {{0, 1}, {1, 1}})};
      for (int i = 0; i < 6; ++i) e8.push_back(evec(Q, 8, {{i + 1, 1}, {i, -1}}));
      R.simple_roots.assign(e8.begin(), e8.begin() + t.rank);
      break;
    }
    case 'F': {
      R.dim = 4;
      R.field = Q;
      R.simple_roots = {evec(Q, 4, {{1, 1}, {2, -1}}), evec(Q, 4, {{2, 1}, {3, -1}}), evec(Q, 4, {{3, 1}}),
                        qvec(Q, {h, -h, -h, -h})};
      break;
    }
    case 'G': {
      R.dim = 3;
      R.field = Q;
      R.simple_roots = {evec(Q, 3, {{0, 1}, {1, -1}}), evec(Q, 3, {{0, -2}, {1, 1}, {2, 1}})};
      break;
    }
    case 'H': {
      FieldRef K = quadratic_field(5);
      R.field = K;
      FieldElement phi = (FieldElement(K, 1) + FieldElement::generator(K)) / FieldElement(K, 2);
      FieldElement half(K, h), one(K, 1), zero(K);
      FieldElement phi1 = phi - one;
      if (t.rank == 3) {
        R.dim = 3;
        R.simple_roots = {Vector{zero, one, zero}, Vector{half * phi1, -half * phi, -half}, Vector{zero, zero, one}};
      } else {
        R.dim = 4;
        R.simple_roots = {Vector{zero, zero, zero, one}, Vector{zero, half * phi1, -half, -half * phi},
                          Vector{half * phi1, -half * phi, half, zero}, Vector{-half * phi1, half * phi, half, zero}};
      }
      break;
    }
    case 'I': {
      R.dim = 2;
      if (t.m == 5) {
        FieldRef K = quadratic_field(5);
        R.field = K;
        R.dim = 3;
        FieldElement phi = (FieldElement(K, 1) + FieldElement::generator(K)) / FieldElement(K, 2);
        FieldElement half(K, h), one(K, 1), zero(K);
        R.simple_roots = {Vector{zero, one, zero}, Vector{half * (phi - one), -half * phi, -half}};
      } else if (t.m == 8 || t.m == 12) {
        FieldRef K = quadratic_field(t.m == 8 ? 2 : 3);
        R.field = K;
        FieldElement g = FieldElement::generator(K);
        FieldElement y = t.m == 8 ? g - FieldElement(K, 1) : FieldElement(K, 2) - g;
        R.simple_roots = {Vector{FieldElement(K, 1), FieldElement(K)}, Vector{FieldElement(K, -1), y}};
      } else {
        throw RootSystemError("I2(" + std::to_string(t.m) +
                              ") is not supported exactly (cos(pi/m) outside the supported quadratic fields)");
      }
      break;
    }
    default:
      throw RootSystemError("unknown root system family '" + family + "'");
  }
  detail::finish_root_system(R);
  if (R.positive_roots.size() != expected_positive_count(t))
    throw RootSystemError("positive-root count mismatch for " + R.family);
  if (!verify_reflection_closure(R)) throw RootSystemError("reflection closure failed for " + R.family);
  return R;
}

// ---------------------------------------------------------------------------
// Multiplicities

/// Multiplicity per root orbit, possibly symbolic.
struct MultiplicityFunction {
  std::map<std::string, LinearExpr> by_label;

  const LinearExpr& of(const RootSystem& R, std::size_t root) const {
    auto it = by_label.find(R.label_of_root(root));
    if (it == by_label.end()) throw RootSystemError("no multiplicity given for orbit " + R.label_of_root(root));
    return it->second;
  }
  FieldElement numeric(const RootSystem& R, std::size_t root) const {
    const auto& e = of(R, root);
    if (!e.is_constant()) throw RootSystemError("multiplicity of orbit " + R.label_of_root(root) + " is symbolic");
    return e.constant();
  }
  bool is_numeric() const {
    for (auto& [k, v] : by_label)
      if (!v.is_constant()) return false;
    return true;
  }

  static MultiplicityFunction constant(const RootSystem& R, const FieldElement& c) {
    MultiplicityFunction m;
    for (auto& l : R.orbit_labels) m.by_label[l] = LinearExpr(c);
    return m;
  }
  /// Every orbit label becomes its own symbol.
  static MultiplicityFunction symbolic(const RootSystem& R) {
    MultiplicityFunction m;
    for (auto& l : R.orbit_labels) m.by_label[l] = LinearExpr::symbol(l);
    return m;
  }
};

/// Generalized Coxeter number of the irreducible component spanned by the
/// given simple roots. Throws if the form is not proportional to (u, v).
inline LinearExpr generalized_coxeter_number(const RootSystem& R, const MultiplicityFunction& c,
                                             const std::vector<std::size_t>& component) {
  if (component.empty()) throw RootSystemError("empty component");
  std::vector<bool> in(R.rank(), false);
  for (auto i : component) in[i] = true;
  std::vector<std::size_t> roots;
  for (std::size_t q = 0; q < R.num_positive(); ++q) {
    bool inside = true;
    for (std::size_t i = 0; i < R.rank(); ++i)
      if (!in[i] && !R.simple_coordinates[q][i].is_zero()) inside = false;
    if (inside) roots.push_back(q);
  }
  // B(u, v) = sum over R (twice R+) of c_a (a,u)(a,v)/(a,a).
  auto form = [&](const Vector& u, const Vector& v) {
    LinearExpr s;
    for (auto q : roots) {
      const Vector& a = R.positive_roots[q];
      FieldElement w = FieldElement(2) * dot(a, u) * dot(a, v) / dot(a, a);
      if (!w.is_zero()) s += w * c.of(R, q);
    }
    return s;
  };
  const Vector& u0 = R.simple_roots[component[0]];
  LinearExpr h = dot(u0, u0).inverse() * form(u0, u0);
  for (auto i : component)
    for (auto j : component) {
      const Vector& u = R.simple_roots[i];
      const Vector& v = R.simple_roots[j];
      if (form(u, v) != dot(u, v) * h)
        throw RootSystemError("bilinear form is not proportional to the inner product on the component");
    }
  return h;
}

// ---------------------------------------------------------------------------
// Subspaces and strata

inline std::size_t default_orbit_cap() {
  if (const char* env = std::getenv("CHEREDNIK_ORBIT_CAP")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return 1000000;
}

inline Subspace parabolic_subspace(const RootSystem& R, const std::vector<std::size_t>& nodes) {
  Matrix forms;
  for (auto i : nodes) forms.push_back(R.simple_roots.at(i));
  return Subspace::from_annihilator(std::move(forms), R.dim, R.field);
}

/// BFS closure of {pi} under the given involutive generators.
inline std::vector<Subspace> orbit_of_subspace(const Subspace& pi, const std::vector<Matrix>& involutions,
                                               std::size_t cap = default_orbit_cap()) {
  std::vector<Subspace> orbit{pi};
  std::unordered_set<std::string> seen{pi.key()};
  for (std::size_t q = 0; q < orbit.size(); ++q)
    for (auto& g : involutions) {
      Subspace img = orbit[q].image(g);
      if (seen.insert(img.key()).second) {
        if (orbit.size() >= cap) throw OrbitCapExceeded(cap);
        orbit.push_back(std::move(img));
      }
    }
  return orbit;
}

/// Generators given with their inverses (for non-involutive groups).
inline std::vector<Subspace> orbit_of_subspace(const Subspace& pi, const std::vector<Matrix>& generators,
                                               const std::vector<Matrix>& inverses, std::size_t cap) {
  std::vector<Subspace> orbit{pi};
  std::unordered_set<std::string> seen{pi.key()};
  for (std::size_t q = 0; q < orbit.size(); ++q)
    for (std::size_t g = 0; g < generators.size(); ++g) {
      Subspace img = orbit[q].image(inverses[g]);
      if (seen.insert(img.key()).second) {
        if (orbit.size() >= cap) throw OrbitCapExceeded(cap);
        orbit.push_back(std::move(img));
      }
    }
  return orbit;
}

struct Stratum {
  std::vector<std::size_t> nodes;  // 0-based simple-root indices
  std::vector<std::vector<std::size_t>> components;
  CoxeterType type;
  Subspace pi;
  std::vector<Subspace> orbit;  // empty unless computed

  std::string type_name() const { return type_string(type); }
  bool has_orbit() const { return !orbit.empty(); }
};

inline Stratum make_stratum(const RootSystem& R, std::vector<std::size_t> nodes, bool with_orbit,
                            std::size_t cap = default_orbit_cap()) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (auto i : nodes)
    if (i >= R.rank()) throw RootSystemError("simple-root index out of range");
  Stratum s;
  s.nodes = nodes;
  s.components = graph_components(R, nodes);
  s.type = classify_subgraph(R, nodes);
  s.pi = parabolic_subspace(R, nodes);
  if (with_orbit) s.orbit = orbit_of_subspace(s.pi, R.simple_reflections, cap);
  return s;
}

inline void ensure_orbit(const RootSystem& R, Stratum& s, std::size_t cap = default_orbit_cap()) {
  if (!s.has_orbit()) s.orbit = orbit_of_subspace(s.pi, R.simple_reflections, cap);
}

/// All subsets of {0..r-1} of size <= max_size, by size then lexicographically.
inline std::vector<std::vector<std::size_t>> node_subsets(std::size_t r, std::size_t max_size) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  for (std::size_t size = 0; size <= std::min(r, max_size); ++size) {
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (cur.size() == size) {
        out.push_back(cur);
        return;
      }
      for (std::size_t i = start; i < r; ++i) {
        cur.push_back(i);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
  return out;
}

/// One representative per distinct parabolic stratum with codim <= max_codim,
/// optionally restricted to one Coxeter type.
inline std::vector<Stratum> enumerate_parabolic_strata(const RootSystem& R, std::size_t max_codim,
                                                       const std::optional<CoxeterType>& filter = std::nullopt,
                                                       std::size_t cap = default_orbit_cap()) {
  std::vector<Stratum> found;
  std::vector<std::unordered_set<std::string>> orbit_keys;
  for (auto& nodes : node_subsets(R.rank(), max_codim)) {
    CoxeterType t = classify_subgraph(R, nodes);
    if (filter && t != *filter) continue;
    Subspace pi = parabolic_subspace(R, nodes);
    bool duplicate = false;
    for (std::size_t k = 0; k < found.size() && !duplicate; ++k)
      if (found[k].type == t && orbit_keys[k].count(pi.key())) duplicate = true;
    if (duplicate) continue;
    Stratum s = make_stratum(R, nodes, true, cap);
    std::unordered_set<std::string> keys;
    for (auto& o : s.orbit) keys.insert(o.key());
    orbit_keys.push_back(std::move(keys));
    found.push_back(std::move(s));
  }
  return found;
}

// ---------------------------------------------------------------------------
// Subgraph specifications

namespace detail {

inline std::map<std::string, long> parse_params(const std::string& text) {
  std::map<std::string, long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value in '" + text + "'");
    std::string key = item.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    try {
      out[key] = std::stol(item.substr(eq + 1));
    } catch (...) {
      throw ParseError("bad integer in '" + item + "'");
    }
  }
  return out;
}

}  // namespace detail

/// Simple-root nodes for the classical block stratum: m blocks of k equal
/// coordinates from the start and (B, D only) l zero coordinates at the end.
/// eps = -1 flips the sign in the last block of D_N when mk = N.
inline std::vector<std::size_t> classical_block_nodes(const RootSystem& R, long k, long m, long l, long eps = 1) {
  const char fam = R.type.letter;
  const long N = static_cast<long>(fam == 'A' ? R.dim : R.rank());
  if (k < 0 || m < 0 || l < 0) throw ParseError("negative block parameter");
  if (m > 0 && k < 2) throw ParseError("block size k must be at least 2");
  if (m * k + l > N) throw ParseError("blocks do not fit in " + std::to_string(N) + " coordinates");
  if (l > 0 && fam != 'B' && fam != 'D') throw ParseError("zero block needs family B or D");
  if (fam == 'D' && l == 1) throw ParseError("D_N has no single-coordinate zero block");
  std::vector<std::size_t> nodes;
  for (long b = 0; b < m; ++b)
    for (long i = b * k; i + 1 < (b + 1) * k; ++i) nodes.push_back(static_cast<std::size_t>(i));
  if (eps == -1) {
    if (fam != 'D' || l != 0 || m * k != N) throw ParseError("eps=-1 needs family D with mk = N");
    auto it = std::find(nodes.begin(), nodes.end(), static_cast<std::size_t>(N - 2));
    if (it == nodes.end()) throw ParseError("eps=-1 needs the last block to reach x_N");
    *it = static_cast<std::size_t>(N - 1);
  }
  for (long i = N - l; i < N && l > 0; ++i) nodes.push_back(static_cast<std::size_t>(i));
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

/// Resolves a subgraph specification to simple-root indices (0-based).
///   "none"               empty subgraph
///   "nodes:1,3,5"        explicit 1-based simple-root indices
///   "A1^2:k=2,m=2,l=1"   classical blocks (prefix is checked against the result)
///   "Bl:l=2", "Dp:p=3"   coordinate zero blocks in B_N, D_N
///   "A1^3" or "A1^3#2"   first (or k-th distinct) stratum of that type
inline std::vector<std::size_t> resolve_subgraph(const RootSystem& R, const std::string& spec) {
  std::string s = spec;
  if (s.empty() || s == "none" || s == "empty") return {};
  if (s.rfind("nodes:", 0) == 0) {
    std::vector<std::size_t> nodes;
    std::stringstream ss(s.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) {
      long v;
      try {
        v = std::stol(item);
      } catch (...) {
        throw ParseError("bad node index '" + item + "'");
      }
      if (v < 1 || static_cast<std::size_t>(v) > R.rank()) throw ParseError("node index " + item + " out of range");
      nodes.push_back(static_cast<std::size_t>(v - 1));
    }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
  }
  auto colon = s.find(':');
  if (colon != std::string::npos) {
    std::string head = s.substr(0, colon);
    auto params = detail::parse_params(s.substr(colon + 1));
    auto get = [&](const char* key, long dflt) {
      auto it = params.find(key);
      return it == params.end() ? dflt : it->second;
    };
    std::vector<std::size_t> nodes;
    if (head == "Bl" || head == "Dp") {
      long l = head == "Bl" ? get("l", 0) : get("p", 0);
      if (head == "Bl" && R.type.letter != 'B') throw ParseError("Bl needs family B");
      if (head == "Dp" && R.type.letter != 'D') throw ParseError("Dp needs family D");
      nodes = classical_block_nodes(R, 0, 0, l);
    } else {
      nodes = classical_block_nodes(R, get("k", 0), get("m", 0), get("l", 0), get("eps", 1));
      auto expect = parse_type_string(head);
      if (expect && !head.empty() && *expect != classify_subgraph(R, nodes))
        throw ParseError("subgraph '" + s + "' has type " + type_string(classify_subgraph(R, nodes)) + ", not " + head);
    }
    return nodes;
  }
  std::size_t which = 1;
  auto hash = s.find('#');
  if (hash != std::string::npos) {
    which = std::stoul(s.substr(hash + 1));
    s = s.substr(0, hash);
  }
  auto t = parse_type_string(s);
  if (!t) throw ParseError("cannot parse subgraph '" + spec + "'");
  if (which == 1) {
    for (auto& nodes : node_subsets(R.rank(), t->size() == 0 ? 0 : R.rank()))
      if (nodes.size() >= t->size() && classify_subgraph(R, nodes) == *t) return nodes;
  } else {
    std::size_t size = 0;
    for (auto& c : *t) size += static_cast<std::size_t>(c.rank);
    auto strata = enumerate_parabolic_strata(R, size, t);
    if (strata.size() >= which) return strata[which - 1].nodes;
  }
  throw ParseError("no subgraph of type " + s + " in " + R.family);
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json vector_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (auto& x : v) a.push_back(x.to_string());
  return a;
}

inline nlohmann::json root_system_json(const RootSystem& R) {
  nlohmann::json j;
  j["family"] = R.family;
  j["field"] = R.field->descriptor();
  j["dim"] = R.dim;
  j["rank"] = R.rank();
  j["orbit_labels"] = R.orbit_labels;
  j["simple_roots"] = nlohmann::json::array();
  for (auto& a : R.simple_roots) j["simple_roots"].push_back(vector_json(a));
  j["positive_roots"] = nlohmann::json::array();
  for (std::size_t q = 0; q < R.num_positive(); ++q)
    j["positive_roots"].push_back({{"root", vector_json(R.positive_roots[q])}, {"orbit", R.label_of_root(q)}});
  j["coxeter_matrix"] = R.coxeter_matrix;
  return j;
}

inline nlohmann::json stratum_json(const RootSystem& R, const Stratum& s) {
  nlohmann::json j;
  j["family"] = R.family;
  j["field"] = R.field->descriptor();
  std::vector<std::size_t> nodes1;
  for (auto i : s.nodes) nodes1.push_back(i + 1);
  j["nodes"] = nodes1;
  j["type"] = s.type_name();
  j["dim"] = s.pi.dim();
  j["annihilator"] = nlohmann::json::array();
  for (auto& row : s.pi.annihilator()) j["annihilator"].push_back(vector_json(row));
  if (s.has_orbit()) j["orbit_size"] = s.orbit.size();
  return j;
}

}  // namespace cherednik
