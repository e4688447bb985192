#pragma once

// Sparse multivariate polynomials over a FieldElement field.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cherednik/exactfield.hpp"
#include "cherednik/linalg.hpp"

namespace cherednik {

using Exponent = std::vector<unsigned>;

class Polynomial {
 public:
  using TermMap = std::map<Exponent, FieldElement>;

  Polynomial() = default;
  Polynomial(std::size_t nvars, FieldRef f) : n_(nvars), field_(f) {}

  static Polynomial constant(std::size_t nvars, const FieldElement& c) {
    Polynomial p(nvars, c.field());
    if (!c.is_zero()) p.terms_.emplace(Exponent(nvars, 0), c);
    return p;
  }
  static Polynomial constant(std::size_t nvars, FieldRef f, long c) {
    return constant(nvars, FieldElement(f, c));
  }
  static Polynomial variable(std::size_t nvars, FieldRef f, std::size_t i) {
    Exponent e(nvars, 0);
    e[i] = 1;
    return monomial(f, e);
  }
  static Polynomial monomial(FieldRef f, const Exponent& e, const FieldElement& c) {
    Polynomial p(e.size(), common_field(f, c.field()));
    if (!c.is_zero()) p.terms_.emplace(e, c.embed(p.field_));
    return p;
  }
  static Polynomial monomial(FieldRef f, const Exponent& e) { return monomial(f, e, FieldElement(f, 1)); }
  /// (ell, x) = sum ell_i x_i.
  static Polynomial linear_form(const Vector& ell, FieldRef f) {
    Polynomial p(ell.size(), f);
    for (std::size_t i = 0; i < ell.size(); ++i) {
      if (ell[i].is_zero()) continue;
      Exponent e(ell.size(), 0);
      e[i] = 1;
      p.terms_.emplace(std::move(e), ell[i].embed(f));
    }
    return p;
  }

  std::size_t nvars() const { return n_; }
  FieldRef field() const { return field_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (auto& [e, c] : terms_) {
      int s = 0;
      for (auto k : e) s += static_cast<int>(k);
      d = std::max(d, s);
    }
    return d;
  }

  FieldElement coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? FieldElement(field_) : it->second;
  }

  /// Adds c * x^e.
  void add_term(const Exponent& e, const FieldElement& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c.embed(field_));
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  Polynomial embed(FieldRef target) const {
    if (target == field_) return *this;
    Polynomial r(n_, target);
    for (auto& [e, c] : terms_) r.terms_.emplace(e, c.embed(target));
    return r;
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) {
    check_compatible(o);
    if (field_ != o.field_) *this = embed(common_field(field_, o.field_));
    for (auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_compatible(o);
    if (field_ != o.field_) *this = embed(common_field(field_, o.field_));
    for (auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    Polynomial r(a.n_, common_field(a.field_, b.field_));
    Exponent e(a.n_);
    for (auto& [ea, ca] : a.terms_)
      for (auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  friend Polynomial operator*(const FieldElement& s, const Polynomial& p) {
    Polynomial r(p.n_, common_field(p.field_, s.field()));
    if (s.is_zero()) return r;
    for (auto& [e, c] : p.terms_) r.terms_.emplace(e, c * s);
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.n_ != b.n_) return false;
    if (a.field_ == b.field_) return a.terms_ == b.terms_;
    return (a - b).is_zero();
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(unsigned k) const {
    Polynomial r = constant(n_, field_, 1);
    Polynomial base(*this);
    while (k) {
      if (k & 1) r *= base;
      k >>= 1;
      if (k) base *= base;
    }
    return r;
  }

  Polynomial derivative(std::size_t i) const {
    Polynomial r(n_, field_);
    for (auto& [e, c] : terms_) {
      if (e[i] == 0) continue;
      Exponent d(e);
      d[i] -= 1;
      r.terms_.emplace(std::move(d), c * FieldElement(field_, static_cast<long>(e[i])));
    }
    return r;
  }

  /// sum_i xi_i df/dx_i.
  Polynomial directional_derivative(const Vector& xi) const {
    if (xi.size() != n_) throw FieldError("directional_derivative: direction has wrong length");
    Polynomial r(n_, field_);
    for (std::size_t i = 0; i < n_; ++i)
      if (!xi[i].is_zero()) r += xi[i] * derivative(i);
    return r;
  }

  /// f(y) with x_i replaced by images[i]; all images share a variable count.
  Polynomial substitute(const std::vector<Polynomial>& images, std::size_t target_nvars) const {
    if (images.size() != n_) throw FieldError("substitute: wrong number of images");
    FieldRef f = field_;
    for (auto& im : images) f = common_field(f, im.field_);
    std::vector<std::vector<Polynomial>> powers(n_);
    auto power = [&](std::size_t i, unsigned k) -> const Polynomial& {
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(constant(target_nvars, f, 1));
      while (cache.size() <= k) cache.push_back(cache.back() * images[i]);
      return cache[k];
    };
    Polynomial r(target_nvars, f);
    for (auto& [e, c] : terms_) {
      Polynomial t = constant(target_nvars, c.embed(f));
      for (std::size_t i = 0; i < n_ && !t.is_zero(); ++i)
        if (e[i]) t *= power(i, e[i]);
      r += t;
    }
    return r;
  }

  /// f(M x) for an n x n matrix M.
  Polynomial compose_linear(const Matrix& m) const {
    if (m.size() != n_) throw FieldError("compose_linear: matrix has wrong size");
    FieldRef f = field_;
    for (auto& row : m)
      for (auto& x : row) f = common_field(f, x.field());
    // Monomial matrices (one nonzero per row) map monomials to monomials.
    std::vector<std::size_t> col(n_, n_);
    bool monomial_matrix = true;
    for (std::size_t i = 0; i < n_ && monomial_matrix; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (m[i][j].is_zero()) continue;
        if (col[i] != n_) {
          monomial_matrix = false;
          break;
        }
        col[i] = j;
      }
    for (std::size_t i = 0; i < n_ && monomial_matrix; ++i)
      if (col[i] == n_) monomial_matrix = false;
    if (monomial_matrix) {
      Polynomial r(n_, f);
      for (auto& [e, c] : terms_) {
        Exponent ne(n_, 0);
        FieldElement coeff = c.embed(f);
        for (std::size_t i = 0; i < n_; ++i) {
          if (!e[i]) continue;
          ne[col[i]] += e[i];
          coeff = coeff * m[i][col[i]].pow(e[i]);
        }
        r.add_term(ne, coeff);
      }
      return r;
    }
    std::vector<Polynomial> images;
    images.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) images.push_back(linear_form(m[i], f));
    return substitute(images, n_);
  }

  /// Restriction to the subspace parametrized by the rows of `basis`
  /// (x = sum_k t_k basis[k]); the result is a polynomial in the t_k.
  Polynomial restrict_to(const Matrix& basis) const {
    const std::size_t d = basis.size();
    FieldRef f = field_;
    for (auto& row : basis)
      for (auto& x : row) f = common_field(f, x.field());
    std::vector<Polynomial> images;
    images.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      Vector coeffs;
      for (std::size_t k = 0; k < d; ++k) coeffs.push_back(basis[k][i]);
      images.push_back(linear_form(coeffs, f));
    }
    return substitute(images, d);
  }

  FieldElement evaluate(const Vector& point) const {
    FieldElement s(field_);
    for (auto& [e, c] : terms_) {
      FieldElement t = c;
      for (std::size_t i = 0; i < n_; ++i)
        if (e[i]) t = t * point[i].pow(e[i]);
      s += t;
    }
    return s;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      bool is_const = std::all_of(e.begin(), e.end(), [](unsigned k) { return k == 0; });
      std::string mono;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!e[i]) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(i + 1);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      bool negative = false;
      std::string coeff;
      if (c.is_rational()) {
        negative = sgn(c.rational_part()) < 0;
        mpq_class a = abs(c.rational_part());
        if (a != 1 || is_const) coeff = a.get_str();
      } else {
        coeff = "(" + c.to_string() + ")";
      }
      std::string term = coeff;
      if (!mono.empty()) term = coeff.empty() ? mono : coeff + "*" + mono;
      if (out.empty())
        out = negative ? "-" + term : term;
      else
        out += negative ? " - " + term : " + " + term;
    }
    return out;
  }

 private:
  void check_compatible(const Polynomial& o) const {
    if (n_ != o.n_) throw FieldError("polynomial variable-count mismatch");
  }

  std::size_t n_ = 0;
  FieldRef field_ = rational_field();
  TermMap terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

/// Exact quotient f / (ell, x), or nullopt if (ell, x) does not divide f.
inline std::optional<Polynomial> divide_linear(const Polynomial& f, const Vector& ell) {
  const std::size_t n = f.nvars();
  std::size_t p = n;
  for (std::size_t i = n; i-- > 0;)
    if (!ell[i].is_zero()) {
      p = i;
      break;
    }
  if (p == n) throw FieldError("divide_linear: zero divisor");
  FieldRef fld = common_field(f.field(), ell[p].field());
  Polynomial q(n, fld);
  if (f.is_zero()) return q;
  const FieldElement inv = ell[p].inverse();
  std::vector<std::pair<std::size_t, FieldElement>> rest;
  for (std::size_t v = 0; v < n; ++v)
    if (v != p && !ell[v].is_zero()) rest.emplace_back(v, ell[v].embed(fld));

  // Buckets by the exponent of the pivot variable.
  unsigned top = 0;
  for (auto& [e, c] : f.terms()) top = std::max(top, e[p]);
  std::vector<std::map<Exponent, FieldElement>> buckets(top + 1);
  for (auto& [e, c] : f.terms()) buckets[e[p]].emplace(e, c.embed(fld));
  for (unsigned k = top; k >= 1; --k) {
    for (auto& [e, c] : buckets[k]) {
      if (c.is_zero()) continue;
      Exponent qe(e);
      qe[p] -= 1;
      FieldElement qc = c * inv;
      q.add_term(qe, qc);
      for (auto& [v, r] : rest) {
        Exponent ne(qe);
        ne[v] += 1;
        auto& slot = buckets[k - 1];
        auto it = slot.find(ne);
        FieldElement delta = -(qc * r);
        if (it == slot.end())
          slot.emplace(std::move(ne), delta);
        else
          it->second += delta;
      }
    }
  }
  for (auto& [e, c] : buckets[0])
    if (!c.is_zero()) return std::nullopt;
  return q;
}

/// Reflection matrix I - 2 a a^T / (a, a).
inline Matrix reflection_matrix(const Vector& a) {
  const std::size_t n = a.size();
  FieldRef f = a[0].field();
  for (auto& x : a) f = common_field(f, x.field());
  FieldElement s = FieldElement(f, 2) / dot(a, a);
  Matrix m = identity_matrix(f, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!a[i].is_zero() && !a[j].is_zero()) m[i][j] -= s * a[i] * a[j];
  return m;
}

/// (f - f(action x)) / (form, x); throws if the remainder is nonzero.
inline Polynomial divided_difference(const Polynomial& f, const Matrix& action, const Vector& form) {
  Polynomial diff = f - f.compose_linear(action);
  auto q = divide_linear(diff, form);
  if (!q) throw FieldError("divided difference left a nonzero remainder");
  return *q;
}

/// (f - s_alpha f) / (alpha, x) for the orthogonal reflection s_alpha.
inline Polynomial divided_difference(const Polynomial& f, const Vector& alpha) {
  return divided_difference(f, reflection_matrix(alpha), alpha);
}

inline bool vanishes_on_subspace(const Polynomial& f, const Subspace& s) {
  return f.restrict_to(s.basis()).is_zero();
}

/// All monomials in n variables of total degree <= d.
inline std::vector<Exponent> monomials_up_to(std::size_t n, unsigned d) {
  std::vector<Exponent> out;
  Exponent e(n, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i == n) {
      out.push_back(e);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(rec, 0, d);
  return out;
}

/// Parses "2*x1^2*x2 - 1/3*x3"; coefficients outside Q go in parentheses,
/// e.g. "(1+√5)*x1".
inline Polynomial parse_polynomial(std::string_view s, std::size_t nvars, FieldRef f) {
  Polynomial result(nvars, f);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto read_uint = [&]() -> unsigned long {
    std::size_t st = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (st == i) throw ParseError("expected integer in polynomial '" + std::string(s) + "'");
    return std::stoul(std::string(s.substr(st, i - st)));
  };
  skip();
  if (i == s.size()) throw ParseError("empty polynomial");
  bool first = true;
  while (true) {
    skip();
    if (i == s.size()) break;
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      throw ParseError("expected '+' or '-' in polynomial '" + std::string(s) + "'");
    }
    first = false;
    FieldElement coeff(f, sign);
    Exponent e(nvars, 0);
    bool need_factor = true;
    while (need_factor) {
      skip();
      if (i >= s.size()) throw ParseError("dangling operator in polynomial");
      if (s[i] == 'x') {
        ++i;
        unsigned long v = read_uint();
        if (v == 0 || v > nvars) throw ParseError("variable x" + std::to_string(v) + " out of range");
        unsigned long k = 1;
        if (i < s.size() && s[i] == '^') {
          ++i;
          k = read_uint();
        }
        e[v - 1] += static_cast<unsigned>(k);
      } else if (s[i] == '(') {
        std::size_t depth = 0, j = i;
        for (; j < s.size(); ++j) {
          if (s[j] == '(') ++depth;
          if (s[j] == ')' && --depth == 0) break;
        }
        if (j == s.size()) throw ParseError("unbalanced parenthesis");
        coeff = coeff * parse_element(s.substr(i + 1, j - i - 1), f);
        i = j + 1;
      } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
        std::size_t st = i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
        coeff = coeff * parse_element(s.substr(st, i - st), f);
      } else {
        throw ParseError("unexpected character '" + std::string(1, s[i]) + "' in polynomial");
      }
      skip();
      if (i < s.size() && s[i] == '*') {
        ++i;
      } else {
        need_factor = false;
      }
    }
    result.add_term(e, coeff);
  }
  return result;
}

}  // namespace cherednik
