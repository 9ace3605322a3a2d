#ifndef CQLAB_VEC_HPP
#define CQLAB_VEC_HPP

#include <algorithm>
#include <cassert>
#include <vector>

#include "cqlab/rational.hpp"

namespace cqlab {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;  // row major

inline Rational dot(const QVec& a, const QVec& b) {
  assert(a.size() == b.size());
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool is_zero(const QVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

inline QVec operator+(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline QVec operator-(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline QVec operator*(const Rational& t, const QVec& a) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
  return r;
}

inline QVec operator-(const QVec& a) { return Rational(-1) * a; }

inline QVec mat_vec(const QMat& m, const QVec& v) {
  QVec r;
  r.reserve(m.size());
  for (const auto& row : m) r.push_back(dot(row, v));
  return r;
}

inline QMat transpose(const QMat& m) {
  if (m.empty()) return {};
  QMat t(m[0].size(), QVec(m.size(), Rational(0)));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

/// Scales a rational vector to a primitive integer vector (gcd 1), keeping direction.
inline QVec primitive(const QVec& v) {
  Int lcm_den = 1;
  for (const auto& q : v) lcm_den = boost::multiprecision::lcm(lcm_den, den(q));
  Int g = 0;
  QVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Int n = num(v[i]) * (lcm_den / den(v[i]));
    r[i] = Rational(n);
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(n));
  }
  if (g > 1)
    for (auto& q : r) q /= Rational(g);
  return r;
}

/// Row echelon elimination in place; returns rank. Optionally records pivot columns.
inline std::size_t row_reduce(QMat& m, std::vector<std::size_t>* pivot_cols = nullptr) {
  if (pivot_cols) pivot_cols->clear();
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[r], m[p]);
    Rational inv = Rational(1) / m[r][c];
    for (auto& q : m[r]) q *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

inline std::size_t rank(QMat m) { return row_reduce(m); }

/// Basis of {x : Ax = 0}.
inline QMat kernel_basis(QMat a, std::size_t cols) {
  if (a.empty()) {
    QMat id(cols, QVec(cols, Rational(0)));
    for (std::size_t i = 0; i < cols; ++i) id[i][i] = 1;
    return id;
  }
  std::vector<std::size_t> piv;
  std::size_t r = row_reduce(a, &piv);
  std::vector<bool> is_piv(cols, false);
  for (auto c : piv) is_piv[c] = true;
  QMat basis;
  for (std::size_t c = 0; c < cols; ++c) {
    if (is_piv[c]) continue;
    QVec v(cols, Rational(0));
    v[c] = 1;
    for (std::size_t i = 0; i < r; ++i) v[piv[i]] = -a[i][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// One solution of Ax = b, or nullopt if inconsistent.
inline std::optional<QVec> solve_linear(QMat a, QVec b) {
  std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
  std::vector<std::size_t> piv;
  std::size_t r = row_reduce(a, &piv);
  for (std::size_t i = 0; i < r; ++i)
    if (piv[i] == cols) return std::nullopt;  // pivot in augmented column
  // check zero rows consistency
  for (std::size_t i = r; i < a.size(); ++i)
    if (a[i][cols] != 0) return std::nullopt;
  QVec x(cols, Rational(0));
  for (std::size_t i = 0; i < r; ++i)
    if (piv[i] < cols) x[piv[i]] = a[i][cols];
  return x;
}

/// Keeps a maximal linearly independent subset, in order.
inline QMat independent_subset(const QMat& vs) {
  QMat kept, probe;
  for (const auto& v : vs) {
    probe = kept;
    probe.push_back(v);
    if (rank(probe) > kept.size()) kept.push_back(v);
  }
  return kept;
}

}  // namespace cqlab

#endif
