#pragma once

// Dense exact linear algebra over a FieldElement field, plus subspaces with
// canonical keys for exact orbit deduplication.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cherednik/exactfield.hpp"

namespace cherednik {

using Vector = std::vector<FieldElement>;
using Matrix = std::vector<Vector>;  // row-major

inline Vector zero_vector(FieldRef f, std::size_t n) { return Vector(n, FieldElement(f)); }

inline Vector unit_vector(FieldRef f, std::size_t n, std::size_t i) {
  Vector v = zero_vector(f, n);
  v[i] = FieldElement(f, 1);
  return v;
}

inline Matrix identity_matrix(FieldRef f, std::size_t n) {
  Matrix m(n, zero_vector(f, n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = FieldElement(f, 1);
  return m;
}

inline FieldElement dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw FieldError("dot: length mismatch");
  FieldElement s = a.empty() ? FieldElement() : FieldElement(common_field(a[0].field(), b[0].field()));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

inline bool is_zero_vector(const Vector& v) {
  for (auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline Vector scale(const Vector& v, const FieldElement& s) {
  Vector r(v);
  for (auto& x : r) x = x * s;
  return r;
}

inline Vector add(const Vector& a, const Vector& b) {
  Vector r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

inline Vector sub(const Vector& a, const Vector& b) {
  Vector r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline Vector matvec(const Matrix& m, const Vector& v) {
  Vector r;
  r.reserve(m.size());
  for (auto& row : m) r.push_back(dot(row, v));
  return r;
}

inline Matrix transpose(const Matrix& m) {
  if (m.empty()) return {};
  Matrix t(m[0].size(), Vector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.empty()) return {};
  const std::size_t n = a.size(), k = b.size(), p = b.empty() ? 0 : b[0].size();
  FieldRef f = common_field(a[0].empty() ? rational_field() : a[0][0].field(),
                            b.empty() || b[0].empty() ? rational_field() : b[0][0].field());
  Matrix r(n, zero_vector(f, p));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < p; ++j)
        if (!b[l][j].is_zero()) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

/// Reduced row echelon form in place; returns pivot columns. Zero rows are
/// dropped.
inline std::vector<std::size_t> rref(Matrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col].is_zero()) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[row]);
    FieldElement inv = m[row][col].inverse();
    for (auto& x : m[row]) x = x * inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      FieldElement f = m[r][col];
      for (std::size_t c = col; c < cols; ++c)
        if (!m[row][c].is_zero()) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  return pivots;
}

inline std::size_t rank(Matrix m) { return rref(m).size(); }

/// Basis of {x : m x = 0}, as rows.
inline Matrix nullspace(Matrix m, std::size_t cols, FieldRef f) {
  auto piv = rref(m);
  std::vector<bool> is_piv(cols, false);
  for (auto p : piv) is_piv[p] = true;
  Matrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_piv[free]) continue;
    Vector v = zero_vector(f, cols);
    v[free] = FieldElement(f, 1);
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline Matrix inverse(const Matrix& m) {
  const std::size_t n = m.size();
  FieldRef f = n ? m[0][0].field() : rational_field();
  for (auto& row : m)
    for (auto& x : row) f = common_field(f, x.field());
  Matrix aug(n, zero_vector(f, 2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j].embed(f);
    aug[i][n + i] = FieldElement(f, 1);
  }
  auto piv = rref(aug);
  if (piv.size() != n || piv.back() != n - 1) throw FieldError("singular matrix");
  Matrix r(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = aug[i][n + j];
  return r;
}

/// Linear subspace of K^n described by its annihilator (forms vanishing on
/// it) in reduced echelon form and by a parametrization basis.
class Subspace {
 public:
  Subspace() = default;

  static Subspace from_annihilator(Matrix forms, std::size_t n, FieldRef f) {
    Subspace s;
    s.n_ = n;
    s.field_ = f;
    for (auto& row : forms)
      for (auto& x : row) x = x.embed(f);
    rref(forms);
    s.annihilator_ = std::move(forms);
    s.basis_ = nullspace(s.annihilator_, n, f);
    s.key_ = make_key(s.annihilator_, n);
    return s;
  }

  static Subspace whole(std::size_t n, FieldRef f) { return from_annihilator({}, n, f); }

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  std::size_t codim() const { return annihilator_.size(); }
  FieldRef field() const { return field_; }
  /// RREF rows.
  const Matrix& annihilator() const { return annihilator_; }
  /// Rows span the subspace.
  const Matrix& basis() const { return basis_; }
  const std::string& key() const { return key_; }

  bool contains(const Vector& v) const {
    for (auto& row : annihilator_)
      if (!dot(row, v).is_zero()) return false;
    return true;
  }

  /// True iff the linear form ell vanishes on this subspace.
  bool form_vanishes(const Vector& ell) const {
    for (auto& b : basis_)
      if (!dot(ell, b).is_zero()) return false;
    return true;
  }

  /// Image under x -> M x, with M invertible and given together with its
  /// inverse: forms transform by A -> A M^{-1}.
  Subspace image(const Matrix& m_inverse) const {
    Matrix forms = annihilator_.empty() ? Matrix{} : matmul(annihilator_, m_inverse);
    return from_annihilator(std::move(forms), n_, field_);
  }

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.key_ == b.key_; }

 private:
  static std::string make_key(const Matrix& a, std::size_t n) {
    std::string k = std::to_string(n) + "|";
    for (auto& row : a) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) k += ' ';
        k += row[j].key();
      }
      k += ';';
    }
    return k;
  }

  std::size_t n_ = 0;
  FieldRef field_ = rational_field();
  Matrix annihilator_;
  Matrix basis_;
  std::string key_;
};

inline std::string vector_to_string(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].to_string();
  }
  return s + ")";
}

}  // namespace cherednik
