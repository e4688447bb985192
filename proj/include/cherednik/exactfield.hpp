#pragma once

// Exact arithmetic in Q, Q(sqrt d) and Q(zeta_m).
//
// Every field is a simple extension Q[g]/(p(g)) with p monic. Elements are
// coefficient vectors over Q of length deg p, reduced modulo p. Fields are
// interned, so a FieldRef is a stable pointer that can be compared directly.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstddef>
#include <deque>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cherednik {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FieldKind { rational, quadratic, cyclotomic };

class Field;
using FieldRef = const Field*;

namespace detail {

// Integer polynomial helpers used to build cyclotomic polynomials.
using IntPoly = std::vector<mpz_class>;  // low -> high

inline IntPoly exact_divide(IntPoly num, const IntPoly& den) {
  const std::size_t dn = den.size() - 1;
  if (num.size() < den.size()) return {mpz_class(0)};
  IntPoly q(num.size() - dn, mpz_class(0));
  for (std::size_t k = num.size(); k-- > dn;) {
    mpz_class c = num[k] / den[dn];
    q[k - dn] = c;
    for (std::size_t j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
  }
  return q;
}

inline IntPoly cyclotomic_polynomial(long m) {
  IntPoly p(static_cast<std::size_t>(m) + 1, mpz_class(0));
  p[0] = -1;
  p[static_cast<std::size_t>(m)] = 1;
  for (long d = 1; d < m; ++d)
    if (m % d == 0) p = exact_divide(p, cyclotomic_polynomial(d));
  return p;
}

inline bool is_squarefree(long d) {
  long a = d < 0 ? -d : d;
  for (long p = 2; p * p <= a; ++p)
    if (a % (p * p) == 0) return false;
  return true;
}

inline long euler_phi(long m) {
  long r = m;
  long a = m;
  for (long p = 2; p * p <= a; ++p) {
    if (a % p == 0) {
      while (a % p == 0) a /= p;
      r -= r / p;
    }
  }
  if (a > 1) r -= r / a;
  return r;
}

}  // namespace detail

class Field {
 public:
  FieldKind kind() const { return kind_; }
  /// Radicand d for quadratic fields, conductor m for cyclotomic ones, 1 for Q.
  long parameter() const { return param_; }
  std::size_t degree() const { return degree_; }
  /// Monic defining polynomial, coefficients low -> high (size degree + 1).
  const std::vector<mpq_class>& modulus() const { return modulus_; }
  /// x^k mod p for 0 <= k <= 2 * degree - 2.
  const std::vector<mpq_class>& power_reduction(std::size_t k) const { return reductions_[k]; }

  std::string descriptor() const {
    switch (kind_) {
      case FieldKind::rational: return "Q";
      case FieldKind::quadratic: return "Q(sqrt" + std::to_string(param_) + ")";
      case FieldKind::cyclotomic: return "Q(zeta" + std::to_string(param_) + ")";
    }
    return "?";
  }

  std::string generator_symbol() const {
    switch (kind_) {
      case FieldKind::rational: return "";
      case FieldKind::quadratic: return "√" + std::to_string(param_);
      case FieldKind::cyclotomic: return "z";
    }
    return "";
  }

 private:
  friend FieldRef make_field(FieldKind, long);

  Field(FieldKind kind, long param) : kind_(kind), param_(param) {
    switch (kind) {
      case FieldKind::rational:
        modulus_ = {mpq_class(0), mpq_class(1)};
        break;
      case FieldKind::quadratic:
        modulus_ = {mpq_class(-param), mpq_class(0), mpq_class(1)};
        break;
      case FieldKind::cyclotomic: {
        auto p = detail::cyclotomic_polynomial(param);
        modulus_.clear();
        for (auto& c : p) modulus_.emplace_back(c);
        break;
      }
    }
    degree_ = modulus_.size() - 1;
    const std::size_t n = degree_;
    const std::size_t top = n == 0 ? 0 : 2 * n - 1;
    reductions_.assign(std::max<std::size_t>(top, 1), std::vector<mpq_class>(n, mpq_class(0)));
    for (std::size_t k = 0; k < reductions_.size(); ++k) {
      if (k < n) {
        reductions_[k][k] = 1;
        continue;
      }
      // x^k = x * x^{k-1}
      const auto& prev = reductions_[k - 1];
      std::vector<mpq_class> cur(n, mpq_class(0));
      for (std::size_t j = 0; j + 1 < n; ++j) cur[j + 1] = prev[j];
      const mpq_class lead = prev[n - 1];
      for (std::size_t j = 0; j < n; ++j) cur[j] -= lead * modulus_[j];
      reductions_[k] = std::move(cur);
    }
  }

  FieldKind kind_;
  long param_;
  std::size_t degree_ = 1;
  std::vector<mpq_class> modulus_;
  std::vector<std::vector<mpq_class>> reductions_;
};

inline FieldRef make_field(FieldKind kind, long param) {
  static std::mutex mu;
  static std::deque<std::unique_ptr<Field>> registry;
  if (kind == FieldKind::rational) param = 1;
  if (kind == FieldKind::quadratic) {
    if (param == 0 || param == 1 || !detail::is_squarefree(param))
      throw FieldError("quadratic field needs a squarefree d != 0, 1 (got " + std::to_string(param) + ")");
  }
  if (kind == FieldKind::cyclotomic && param < 3)
    throw FieldError("cyclotomic field needs m >= 3 (got " + std::to_string(param) + ")");
  std::lock_guard<std::mutex> lock(mu);
  for (auto& f : registry)
    if (f->kind() == kind && f->parameter() == param) return f.get();
  registry.emplace_back(new Field(kind, param));
  return registry.back().get();
}

inline FieldRef rational_field() { return make_field(FieldKind::rational, 1); }
inline FieldRef quadratic_field(long d) { return make_field(FieldKind::quadratic, d); }
inline FieldRef cyclotomic_field(long m) { return make_field(FieldKind::cyclotomic, m); }

/// The smallest of the two fields containing both, when one of them is Q.
inline FieldRef common_field(FieldRef a, FieldRef b) {
  if (a == b) return a;
  if (a->kind() == FieldKind::rational) return b;
  if (b->kind() == FieldKind::rational) return a;
  throw FieldError("field mismatch: " + a->descriptor() + " vs " + b->descriptor());
}

class FieldElement {
 public:
  FieldElement() : field_(rational_field()), coeffs_(1, mpq_class(0)) {}
  explicit FieldElement(FieldRef f) : field_(f), coeffs_(f->degree(), mpq_class(0)) {}
  FieldElement(FieldRef f, const mpq_class& r) : FieldElement(f) {
    coeffs_[0] = r;
    coeffs_[0].canonicalize();
  }
  FieldElement(FieldRef f, long r) : FieldElement(f) { coeffs_[0] = r; }
  FieldElement(FieldRef f, std::vector<mpq_class> coeffs) : field_(f), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != f->degree()) throw FieldError("coefficient vector has wrong length");
    for (auto& c : coeffs_) c.canonicalize();
  }
  FieldElement(long r) : FieldElement(rational_field(), r) {}  // NOLINT(google-explicit-constructor)
  FieldElement(int r) : FieldElement(rational_field(), static_cast<long>(r)) {}  // NOLINT
  FieldElement(const mpq_class& r) : FieldElement(rational_field(), r) {}  // NOLINT

  static FieldElement generator(FieldRef f) {
    FieldElement g(f);
    if (f->degree() == 1) throw FieldError("Q has no generator");
    g.coeffs_[1] = 1;
    return g;
  }

  /// Power of the cyclotomic generator, zeta^k for any integer k.
  static FieldElement root_of_unity(FieldRef f, long k) {
    if (f->kind() != FieldKind::cyclotomic) throw FieldError("root_of_unity needs a cyclotomic field");
    const long m = f->parameter();
    long e = ((k % m) + m) % m;
    return generator(f).pow(e);
  }

  FieldRef field() const { return field_; }
  const std::vector<mpq_class>& coefficients() const { return coeffs_; }

  bool is_zero() const {
    for (auto& c : coeffs_)
      if (sgn(c) != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
      if (sgn(coeffs_[i]) != 0) return false;
    return true;
  }
  bool is_one() const { return is_rational() && coeffs_[0] == 1; }
  const mpq_class& rational_part() const { return coeffs_[0]; }
  mpq_class rational_value() const {
    if (!is_rational()) throw FieldError("element " + to_string() + " is not rational");
    return coeffs_[0];
  }

  /// Same value viewed in a field containing this one.
  FieldElement embed(FieldRef target) const {
    if (target == field_) return *this;
    if (field_->kind() != FieldKind::rational)
      throw FieldError("cannot embed " + field_->descriptor() + " into " + target->descriptor());
    return FieldElement(target, coeffs_[0]);
  }

  FieldElement operator-() const {
    FieldElement r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  FieldElement& operator+=(const FieldElement& o) {
    if (o.field_ != field_) return *this = *this + o;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  FieldElement& operator-=(const FieldElement& o) {
    if (o.field_ != field_) return *this = *this - o;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  FieldElement& operator/=(const FieldElement& o) { return *this = *this / o; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    FieldRef f = common_field(a.field_, b.field_);
    if (a.field_ == f && b.field_ == f) {
      FieldElement r(a);
      for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
      return r;
    }
    return a.embed(f) + b.embed(f);
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    FieldRef f = common_field(a.field_, b.field_);
    if (a.field_ == f && b.field_ == f) {
      FieldElement r(a);
      for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] -= b.coeffs_[i];
      return r;
    }
    return a.embed(f) - b.embed(f);
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    FieldRef f = common_field(a.field_, b.field_);
    if (a.is_rational() && a.field_->kind() == FieldKind::rational) return b.scaled(a.coeffs_[0], f);
    if (b.is_rational() && b.field_->kind() == FieldKind::rational) return a.scaled(b.coeffs_[0], f);
    const std::size_t n = f->degree();
    if (n == 1) return FieldElement(f, a.coeffs_[0] * b.coeffs_[0]);
    std::vector<mpq_class> prod(2 * n - 1, mpq_class(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn(a.coeffs_[i]) == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(b.coeffs_[j]) != 0) prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    FieldElement r(f);
    for (std::size_t k = 0; k < prod.size(); ++k) {
      if (sgn(prod[k]) == 0) continue;
      if (k < n) {
        r.coeffs_[k] += prod[k];
        continue;
      }
      const auto& red = f->power_reduction(k);
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(red[j]) != 0) r.coeffs_[j] += prod[k] * red[j];
    }
    return r;
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    if (a.field_ == b.field_) return a.coeffs_ == b.coeffs_;
    return (a - b).is_zero();
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  FieldElement inverse() const {
    if (is_zero()) throw FieldError("division by zero");
    const std::size_t n = field_->degree();
    if (is_rational()) return FieldElement(field_, mpq_class(1) / coeffs_[0]);
    if (field_->kind() == FieldKind::quadratic) {
      // (a + b g)^{-1} = (a - b g) / (a^2 - d b^2)
      const mpq_class& a = coeffs_[0];
      const mpq_class& b = coeffs_[1];
      mpq_class norm = a * a - mpq_class(field_->parameter()) * b * b;
      return FieldElement(field_, std::vector<mpq_class>{a / norm, -b / norm});
    }
    // Solve (multiplication-by-this matrix) * y = e_0 by Gaussian elimination.
    std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n + 1, mpq_class(0)));
    for (std::size_t col = 0; col < n; ++col) {
      FieldElement basis(field_);
      basis.coeffs_[col] = 1;
      FieldElement img = *this * basis;
      for (std::size_t row = 0; row < n; ++row) m[row][col] = img.coeffs_[row];
    }
    m[0][n] = 1;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      while (piv < n && sgn(m[piv][col]) == 0) ++piv;
      if (piv == n) throw FieldError("singular multiplication matrix");
      std::swap(m[piv], m[col]);
      mpq_class inv = mpq_class(1) / m[col][col];
      for (auto& x : m[col]) x *= inv;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || sgn(m[r][col]) == 0) continue;
        mpq_class f = m[r][col];
        for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
      }
    }
    std::vector<mpq_class> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = m[i][n];
    return FieldElement(field_, std::move(y));
  }

  FieldElement pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement result(field_, 1);
    FieldElement base(*this);
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Image under zeta -> zeta^{-1}.
  FieldElement complex_conjugate() const {
    if (field_->kind() != FieldKind::cyclotomic)
      throw FieldError("complex conjugation is only defined here for cyclotomic fields");
    FieldElement r(field_);
    FieldElement zinv = root_of_unity(field_, -1);
    FieldElement power(field_, 1);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (sgn(coeffs_[k]) != 0) r += power.scaled(coeffs_[k], field_);
      power = power * zinv;
    }
    return r;
  }

  /// Stable textual key; equal keys iff equal elements of the same field.
  std::string key() const {
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) s += ',';
      s += coeffs_[i].get_str();
    }
    return s;
  }

  std::string to_string() const {
    const std::string g = field_->generator_symbol();
    std::string out;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      const mpq_class& c = coeffs_[k];
      if (sgn(c) == 0) continue;
      std::string term;
      mpq_class a = abs(c);
      if (k == 0) {
        term = a.get_str();
      } else {
        if (a != 1) term = a.get_str() + "*";
        term += g;
        if (k > 1) term += "^" + std::to_string(k);
      }
      if (out.empty())
        out = (sgn(c) < 0 ? "-" : "") + term;
      else
        out += (sgn(c) < 0 ? "-" : "+") + term;
    }
    return out.empty() ? "0" : out;
  }

  /// Approximate complex value for display only.
  std::pair<double, double> approximate() const {
    double re = 0, im = 0;
    const double pi = 3.14159265358979323846;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      double c = coeffs_[k].get_d();
      if (k == 0) {
        re += c;
        continue;
      }
      if (field_->kind() == FieldKind::quadratic) {
        const long d = field_->parameter();
        if (d > 0)
          re += c * std::sqrt(static_cast<double>(d));
        else
          im += c * std::sqrt(static_cast<double>(-d));
      } else {
        double ang = 2 * pi * static_cast<double>(k) / static_cast<double>(field_->parameter());
        re += c * std::cos(ang);
        im += c * std::sin(ang);
      }
    }
    return {re, im};
  }

 private:
  FieldElement scaled(const mpq_class& s, FieldRef target) const {
    FieldElement r = embed(target);
    for (auto& c : r.coeffs_) c *= s;
    return r;
  }

  FieldRef field_;
  std::vector<mpq_class> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const FieldElement& a) { return os << a.to_string(); }

inline FieldElement field_zero(FieldRef f) { return FieldElement(f); }
inline FieldElement field_one(FieldRef f) { return FieldElement(f, 1); }

namespace detail {

inline void skip_ws(std::string_view s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline bool read_rational(std::string_view s, std::size_t& i, mpq_class& out) {
  std::size_t start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == start) return false;
  std::string num(s.substr(start, i - start));
  std::string den = "1";
  if (i < s.size() && s[i] == '/') {
    std::size_t ds = ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == ds) throw ParseError("missing denominator in '" + std::string(s) + "'");
    den = std::string(s.substr(ds, i - ds));
  }
  out = mpq_class(mpz_class(num), mpz_class(den));
  if (sgn(out.get_den()) == 0) throw ParseError("zero denominator");
  out.canonicalize();
  return true;
}

// Reads the generator token of `f` if present: "√d", "sqrt(d)", "sqrtd", "z".
inline bool read_generator(std::string_view s, std::size_t& i, FieldRef f) {
  auto starts = [&](std::string_view t) { return s.substr(i, t.size()) == t; };
  if (f->kind() == FieldKind::cyclotomic) {
    if (starts("z")) {
      i += 1;
      return true;
    }
    return false;
  }
  if (f->kind() != FieldKind::quadratic) return false;
  std::size_t save = i;
  if (starts("√"))
    i += std::string_view("√").size();
  else if (starts("sqrt"))
    i += 4;
  else
    return false;
  bool paren = i < s.size() && s[i] == '(';
  if (paren) ++i;
  bool neg = i < s.size() && s[i] == '-';
  if (neg) ++i;
  std::size_t ds = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (ds == i) {
    i = save;
    return false;
  }
  long d = std::stol(std::string(s.substr(ds, i - ds)));
  if (neg) d = -d;
  if (paren) {
    if (i >= s.size() || s[i] != ')') throw ParseError("unbalanced sqrt(...)");
    ++i;
  }
  if (d != f->parameter())
    throw ParseError("generator sqrt" + std::to_string(d) + " does not belong to " + f->descriptor());
  return true;
}

}  // namespace detail

/// Parses the rendering grammar of FieldElement::to_string (and a few
/// spellings such as "sqrt(5)") into an element of `f`.
inline FieldElement parse_element(std::string_view s, FieldRef f) {
  using namespace detail;
  FieldElement acc(f);
  std::size_t i = 0;
  skip_ws(s, i);
  if (i == s.size()) throw ParseError("empty number");
  bool first = true;
  while (true) {
    skip_ws(s, i);
    if (i == s.size()) break;
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
      skip_ws(s, i);
    } else if (!first) {
      throw ParseError("expected '+' or '-' in '" + std::string(s) + "'");
    }
    first = false;
    mpq_class coeff(1);
    bool have_coeff = read_rational(s, i, coeff);
    skip_ws(s, i);
    if (have_coeff && i < s.size() && s[i] == '*') {
      ++i;
      skip_ws(s, i);
    }
    long power = 0;
    if (read_generator(s, i, f)) {
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t ds = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (ds == i) throw ParseError("missing exponent");
        power = std::stol(std::string(s.substr(ds, i - ds)));
      }
    } else if (!have_coeff) {
      throw ParseError("cannot parse number '" + std::string(s) + "' in " + f->descriptor());
    }
    FieldElement term = power == 0 ? FieldElement(f, coeff) : FieldElement::generator(f).pow(power) * FieldElement(f, coeff);
    if (sign < 0) term = -term;
    acc += term;
  }
  return acc;
}

}  // namespace cherednik
