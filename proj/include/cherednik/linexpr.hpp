#pragma once

// Affine expressions a_0 + sum a_i c_i over a field, used for symbolic
// multiplicities.

#include <map>
#include <string>

#include "cherednik/exactfield.hpp"

namespace cherednik {

class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(const FieldElement& c) { add("", c); }  // NOLINT(google-explicit-constructor)
  LinearExpr(long c) : LinearExpr(FieldElement(c)) {}  // NOLINT(google-explicit-constructor)

  static LinearExpr symbol(const std::string& name) {
    LinearExpr e;
    e.add(name, FieldElement(1));
    return e;
  }

  /// Keys are parameter names; "" is the constant term.
  const std::map<std::string, FieldElement>& terms() const { return terms_; }

  void add(const std::string& name, const FieldElement& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(name);
    if (it == terms_.end()) {
      terms_.emplace(name, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.count("")); }
  FieldElement constant() const {
    auto it = terms_.find("");
    return it == terms_.end() ? FieldElement(0) : it->second;
  }
  FieldElement coefficient(const std::string& name) const {
    auto it = terms_.find(name);
    return it == terms_.end() ? FieldElement(0) : it->second;
  }

  LinearExpr& operator+=(const LinearExpr& o) {
    for (auto& [k, v] : o.terms_) add(k, v);
    return *this;
  }
  LinearExpr& operator-=(const LinearExpr& o) {
    for (auto& [k, v] : o.terms_) add(k, -v);
    return *this;
  }
  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
  friend LinearExpr operator*(const FieldElement& s, const LinearExpr& e) {
    LinearExpr r;
    for (auto& [k, v] : e.terms_) r.add(k, s * v);
    return r;
  }
  friend bool operator==(const LinearExpr& a, const LinearExpr& b) { return (a - b).is_zero(); }
  friend bool operator!=(const LinearExpr& a, const LinearExpr& b) { return !(a == b); }

  FieldElement evaluate(const std::map<std::string, FieldElement>& values) const {
    FieldElement s = constant();
    for (auto& [k, v] : terms_) {
      if (k.empty()) continue;
      auto it = values.find(k);
      if (it == values.end()) throw FieldError("no value for parameter " + k);
      s += v * it->second;
    }
    return s;
  }

  /// Renders the non-constant part, e.g. "2*c1 + 2*c2"; "0" if there is none.
  std::string variable_part_string() const {
    std::string out;
    for (auto& [k, v] : terms_) {
      if (k.empty()) continue;
      bool neg = v.is_rational() && sgn(v.rational_part()) < 0;
      FieldElement a = neg ? -v : v;
      std::string coeff = a.is_one() ? "" : (a.is_rational() ? a.to_string() : "(" + a.to_string() + ")") + "*";
      std::string term = coeff + k;
      if (out.empty())
        out = neg ? "-" + term : term;
      else
        out += neg ? " - " + term : " + " + term;
    }
    return out.empty() ? "0" : out;
  }

  std::string to_string() const {
    if (is_constant()) return constant().to_string();
    std::string s = variable_part_string();
    FieldElement c = constant();
    if (c.is_zero()) return s;
    if (c.is_rational() && sgn(c.rational_part()) < 0) return s + " - " + (-c).to_string();
    return s + " + " + c.to_string();
  }

  /// "lhs = rhs" rendering of the equation *this = value.
  std::string equation_string(const FieldElement& value) const {
    return variable_part_string() + " = " + (value - constant()).to_string();
  }

 private:
  std::map<std::string, FieldElement> terms_;
};

}  // namespace cherednik
