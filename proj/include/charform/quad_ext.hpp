#pragma once

#include <vector>

#include "charform/matrix.hpp"

namespace charform {

/// x0 + x1 s in K = F[s]/(s^2 + s + c).
struct QuadExtElement {
  FieldElement x0;
  FieldElement x1;

  friend bool operator==(const QuadExtElement& p, const QuadExtElement& q) { return p.x0 == q.x0 && p.x1 == q.x1; }
};

/// The quadratic ring K = F[s]/(s^2 + s + c). A field when c is not of the form r^2 + r, split
/// (F x F) otherwise; all callers only need ring operations.
class QuadExtRing {
 public:
  using Element = QuadExtElement;

  QuadExtRing(Field f, FieldElement c) : field_(std::move(f)), c_(std::move(c)) {}

  const Field& field() const { return field_; }
  const FieldElement& c() const { return c_; }

  Element zero() const { return {FieldElement::zero(field_), FieldElement::zero(field_)}; }
  Element one() const { return {FieldElement::one(field_), FieldElement::zero(field_)}; }
  Element embed(const FieldElement& x) const { return {x, FieldElement::zero(field_)}; }
  Element generator() const { return {FieldElement::zero(field_), FieldElement::one(field_)}; }

  Element add(const Element& p, const Element& q) const { return {p.x0 + q.x0, p.x1 + q.x1}; }

  Element mul(const Element& p, const Element& q) const {
    if (p.x1.is_zero() && q.x1.is_zero()) return {p.x0 * q.x0, p.x1};
    const FieldElement t = p.x1 * q.x1;
    return {p.x0 * q.x0 + c_ * t, p.x0 * q.x1 + p.x1 * q.x0 + t};
  }

  /// The nontrivial automorphism s -> s + 1.
  Element conj(const Element& p) const { return {p.x0 + p.x1, p.x1}; }

  bool is_zero(const Element& p) const { return p.x0.is_zero() && p.x1.is_zero(); }

 private:
  Field field_;
  FieldElement c_;
};

/// F itself, with the same interface as QuadExtRing.
class FieldRing {
 public:
  using Element = FieldElement;

  explicit FieldRing(Field f) : field_(std::move(f)) {}

  Element zero() const { return FieldElement::zero(field_); }
  Element one() const { return FieldElement::one(field_); }
  Element add(const Element& p, const Element& q) const { return p + q; }
  Element mul(const Element& p, const Element& q) const { return p * q; }
  bool is_zero(const Element& p) const { return p.is_zero(); }

 private:
  Field field_;
};

/// Characteristic polynomial det(X - A) over a commutative ring of characteristic 2, by
/// Berkowitz's division-free algorithm. Coefficients lowest degree first; entry n is 1.
template <class Ring>
std::vector<typename Ring::Element> charpoly(const Ring& ring, const Matrix<typename Ring::Element>& a) {
  using E = typename Ring::Element;
  const std::size_t n = a.rows();
  if (n == 0) return {ring.one()};
  // p holds the charpoly of the leading r x r block, highest degree first.
  std::vector<E> p{ring.one(), a(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    std::vector<E> col{ring.one(), a(r, r)};
    // s_k = A_r^k S with S the column above the diagonal entry, then R s_k.
    std::vector<E> s(r);
    for (std::size_t i = 0; i < r; ++i) s[i] = a(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      E dot = ring.zero();
      for (std::size_t j = 0; j < r; ++j) {
        if (!ring.is_zero(a(r, j)) && !ring.is_zero(s[j])) dot = ring.add(dot, ring.mul(a(r, j), s[j]));
      }
      col.push_back(dot);
      if (k + 1 == r) break;
      std::vector<E> next(r, ring.zero());
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
          if (!ring.is_zero(a(i, j)) && !ring.is_zero(s[j])) next[i] = ring.add(next[i], ring.mul(a(i, j), s[j]));
        }
      }
      s = std::move(next);
    }
    std::vector<E> q(r + 2, ring.zero());
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= std::min(i, r); ++j) {
        if (!ring.is_zero(col[i - j]) && !ring.is_zero(p[j])) q[i] = ring.add(q[i], ring.mul(col[i - j], p[j]));
      }
    }
    p = std::move(q);
  }
  return std::vector<E>(p.rbegin(), p.rend());
}

template <class Ring>
Matrix<typename Ring::Element> ring_mat_mul(const Ring& ring, const Matrix<typename Ring::Element>& x,
                                            const Matrix<typename Ring::Element>& y) {
  Matrix<typename Ring::Element> r(x.rows(), y.cols(), ring.zero());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t k = 0; k < x.cols(); ++k) {
      if (ring.is_zero(x(i, k))) continue;
      for (std::size_t j = 0; j < y.cols(); ++j) {
        if (!ring.is_zero(y(k, j))) r(i, j) = ring.add(r(i, j), ring.mul(x(i, k), y(k, j)));
      }
    }
  }
  return r;
}

/// p(A) by Horner's rule, coefficients lowest degree first.
template <class Ring>
Matrix<typename Ring::Element> evaluate_poly_at(const Ring& ring, const std::vector<typename Ring::Element>& p,
                                                const Matrix<typename Ring::Element>& a) {
  const std::size_t n = a.rows();
  Matrix<typename Ring::Element> acc(n, n, ring.zero());
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc = ring_mat_mul(ring, acc, a);
    for (std::size_t i = 0; i < n; ++i) acc(i, i) = ring.add(acc(i, i), *it);
  }
  return acc;
}

}  // namespace charform
