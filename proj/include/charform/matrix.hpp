#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "charform/field.hpp"

namespace charform {

/// Row-major dense matrix over any value type.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Vec = std::vector<FieldElement>;
using FieldMatrix = Matrix<FieldElement>;

inline Vec zero_vec(const Field& f, std::size_t n) { return Vec(n, FieldElement::zero(f)); }

inline Vec unit_vec(const Field& f, std::size_t n, std::size_t i) {
  Vec v = zero_vec(f, n);
  v[i] = FieldElement::one(f);
  return v;
}

inline bool is_zero_vec(const Vec& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

inline Vec scale(const FieldElement& c, const Vec& a) {
  Vec r = a;
  for (auto& x : r) x = c * x;
  return r;
}

inline FieldMatrix identity_matrix(const Field& f, std::size_t n) {
  FieldMatrix m(n, n, FieldElement::zero(f));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldElement::one(f);
  return m;
}

/// Matrix whose columns are the given vectors.
inline FieldMatrix from_columns(const Field& f, const std::vector<Vec>& cols, std::size_t rows) {
  FieldMatrix m(rows, cols.size(), FieldElement::zero(f));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

inline Vec mat_vec(const FieldMatrix& m, const Vec& v) {
  Vec r(m.rows(), FieldElement::zero(v.front().field()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_zero() && !v[j].is_zero()) r[i] += m(i, j) * v[j];
    }
  }
  return r;
}

inline FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b) {
  FieldMatrix r(a.rows(), b.cols(), FieldElement::zero(a(0, 0).field()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
      }
    }
  }
  return r;
}

inline FieldMatrix transpose(const FieldMatrix& a) {
  FieldMatrix r(a.cols(), a.rows(), a(0, 0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  }
  return r;
}

/// Reduced row echelon form and pivot columns.
struct Echelon {
  FieldMatrix reduced;
  std::vector<std::size_t> pivots;
};

inline Echelon row_reduce(FieldMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    const FieldElement inv = m(r, c).inv();
    for (std::size_t j = c; j < m.cols(); ++j) {
      if (!m(r, j).is_zero()) m(r, j) = m(r, j) * inv;
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const FieldElement factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!m(r, j).is_zero()) m(i, j) += factor * m(r, j);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const FieldMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return row_reduce(m).pivots.size();
}

/// Basis of {x : m x = 0}.
inline std::vector<Vec> nullspace(const FieldMatrix& m) {
  const Field& f = m(0, 0).field();
  const Echelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v = unit_vec(f, m.cols(), free);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = e.reduced(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some x with m x = b, or nullopt.
inline std::optional<Vec> solve(const FieldMatrix& m, const Vec& b) {
  const Field& f = b.front().field();
  FieldMatrix aug(m.rows(), m.cols() + 1, FieldElement::zero(f));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const Echelon e = row_reduce(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vec x = zero_vec(f, m.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.reduced(i, m.cols());
  return x;
}

inline std::optional<FieldMatrix> inverse(const FieldMatrix& m) {
  const std::size_t n = m.rows();
  const Field& f = m(0, 0).field();
  FieldMatrix aug(n, 2 * n, FieldElement::zero(f));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = FieldElement::one(f);
  }
  const Echelon e = row_reduce(std::move(aug));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  FieldMatrix inv(n, n, FieldElement::zero(f));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  }
  return inv;
}

/// Incremental basis of a subspace with membership and coordinate extraction.
class SubspaceBuilder {
 public:
  explicit SubspaceBuilder(std::size_t ambient) : ambient_(ambient) {}

  /// Adds v when independent of the vectors so far; returns whether it was added.
  bool add(const Vec& v) {
    Vec w = reduce(v);
    std::size_t lead = 0;
    while (lead < w.size() && w[lead].is_zero()) ++lead;
    if (lead == w.size()) return false;
    const FieldElement inv = w[lead].inv();
    for (auto& x : w) {
      if (!x.is_zero()) x = x * inv;
    }
    for (auto& row : rows_) {
      if (!row[lead].is_zero()) {
        const FieldElement c = row[lead];
        for (std::size_t j = 0; j < ambient_; ++j) {
          if (!w[j].is_zero()) row[j] += c * w[j];
        }
      }
    }
    rows_.push_back(std::move(w));
    leads_.push_back(lead);
    originals_.push_back(v);
    return true;
  }

  bool contains(const Vec& v) const { return is_zero_vec(reduce(v)); }
  std::size_t dimension() const { return rows_.size(); }
  const std::vector<Vec>& basis() const { return originals_; }

 private:
  Vec reduce(Vec w) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const FieldElement c = w[leads_[r]];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < ambient_; ++j) {
        if (!rows_[r][j].is_zero()) w[j] += c * rows_[r][j];
      }
    }
    return w;
  }

  std::size_t ambient_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> leads_;
  std::vector<Vec> originals_;
};

}  // namespace charform
