#pragma once

#include <array>
#include <memory>

#include "charform/isotropy.hpp"
#include "charform/quad_ext.hpp"

namespace charform {

/// [a, b): generators u, v with u^2 + u = a, v^2 = b, vu = (u + 1)v.
class QuaternionAlgebra {
 public:
  QuaternionAlgebra(FieldElement a, FieldElement b) : field_(a.field()), a_(std::move(a)), b_(std::move(b)) {
    require_same_field(field_, b_.field());
    if (b_.is_zero()) throw Error(ErrorKind::InvalidArgument, "quaternion parameter b must be nonzero");
  }

  const Field& field() const { return field_; }
  const FieldElement& a() const { return a_; }
  const FieldElement& b() const { return b_; }

  bool same_as(const QuaternionAlgebra& o) const {
    return field_->same_as(*o.field_) && a_ == o.a_ && b_ == o.b_;
  }

  /// The splitting ring F[s]/(s^2 + s + a).
  QuadExtRing splitting_ring() const { return QuadExtRing(field_, a_); }

 private:
  Field field_;
  FieldElement a_;
  FieldElement b_;
};

using Quaternions = std::shared_ptr<const QuaternionAlgebra>;

inline Quaternions make_quaternions(const FieldElement& a, const FieldElement& b) {
  return std::make_shared<const QuaternionAlgebra>(a, b);
}

/// The split algebra [0, 1) = M_2(F).
inline Quaternions split_quaternions(const Field& f) {
  return make_quaternions(FieldElement::zero(f), FieldElement::one(f));
}

/// x0 + x1 u + x2 v + x3 uv.
struct QuaternionElement {
  Quaternions alg;
  std::array<FieldElement, 4> c;

  static QuaternionElement zero(const Quaternions& q) {
    const FieldElement z = FieldElement::zero(q->field());
    return {q, {z, z, z, z}};
  }
  static QuaternionElement scalar(const Quaternions& q, const FieldElement& x) {
    QuaternionElement r = zero(q);
    r.c[0] = x;
    return r;
  }
  static QuaternionElement one(const Quaternions& q) { return scalar(q, FieldElement::one(q->field())); }
  static QuaternionElement basis(const Quaternions& q, std::size_t i) {
    QuaternionElement r = zero(q);
    r.c[i] = FieldElement::one(q->field());
    return r;
  }

  bool is_zero() const { return c[0].is_zero() && c[1].is_zero() && c[2].is_zero() && c[3].is_zero(); }
  bool is_scalar() const { return c[1].is_zero() && c[2].is_zero() && c[3].is_zero(); }

  friend bool operator==(const QuaternionElement& x, const QuaternionElement& y) { return x.c == y.c; }

  friend QuaternionElement operator+(const QuaternionElement& x, const QuaternionElement& y) {
    return {x.alg, {x.c[0] + y.c[0], x.c[1] + y.c[1], x.c[2] + y.c[2], x.c[3] + y.c[3]}};
  }
  QuaternionElement& operator+=(const QuaternionElement& y) {
    for (std::size_t i = 0; i < 4; ++i) c[i] += y.c[i];
    return *this;
  }
};

inline void require_same_algebra(const QuaternionElement& x, const QuaternionElement& y) {
  if (x.alg != y.alg && !x.alg->same_as(*y.alg)) throw Error(ErrorKind::AlgebraMismatch, "quaternions from different algebras");
}

inline QuaternionElement q_scale(const FieldElement& s, const QuaternionElement& x) {
  return {x.alg, {s * x.c[0], s * x.c[1], s * x.c[2], s * x.c[3]}};
}

/// Product of coordinate vectors in [a, b).
inline std::array<FieldElement, 4> q_mul_coords(const FieldElement& a, const FieldElement& b,
                                                const std::array<FieldElement, 4>& p,
                                                const std::array<FieldElement, 4>& q) {
  const FieldElement x2y3 = p[2] * q[3];
  const FieldElement r0 = p[0] * q[0] + a * p[1] * q[1] + b * (p[2] * q[2] + x2y3 + a * p[3] * q[3]);
  const FieldElement r1 = p[0] * q[1] + p[1] * q[0] + p[1] * q[1] + b * (x2y3 + p[3] * q[2]);
  const FieldElement r2 = p[0] * q[2] + p[2] * q[0] + p[2] * q[1] + a * (p[1] * q[3] + p[3] * q[1]);
  const FieldElement r3 = p[0] * q[3] + p[1] * q[2] + p[1] * q[3] + p[2] * q[1] + p[3] * q[0];
  return {r0, r1, r2, r3};
}

inline QuaternionElement q_mul(const QuaternionElement& x, const QuaternionElement& y) {
  require_same_algebra(x, y);
  if (x.is_scalar()) return q_scale(x.c[0], y);
  if (y.is_scalar()) return q_scale(y.c[0], x);
  return {x.alg, q_mul_coords(x.alg->a(), x.alg->b(), x.c, y.c)};
}

/// Canonical involution: x -> trd(x) + x.
inline QuaternionElement q_conj(const QuaternionElement& x) { return {x.alg, {x.c[0] + x.c[1], x.c[1], x.c[2], x.c[3]}}; }

inline FieldElement q_trd(const QuaternionElement& x) { return x.c[1]; }

inline FieldElement q_nrd(const QuaternionElement& x) {
  const FieldElement& a = x.alg->a();
  const FieldElement& b = x.alg->b();
  const auto& p = x.c;
  return p[0] * p[0] + p[0] * p[1] + a * p[1] * p[1] + b * (p[2] * p[2] + p[2] * p[3] + a * p[3] * p[3]);
}

inline QuaternionElement q_inv(const QuaternionElement& x) {
  const FieldElement n = q_nrd(x);
  if (n.is_zero()) throw Error(ErrorKind::DivisionByZero, "quaternion of reduced norm zero");
  return q_scale(n.inv(), q_conj(x));
}

/// n_Q = <<b; a]] = [1, a] + b[1, a] in the coordinates (x0, x1, x2, x3) up to the block
/// substitution of scale().
inline QuadraticForm nrd_form(const QuaternionAlgebra& q) {
  return quad_pfister(q.field(), {q.b()}, q.a());
}

inline Decision is_division(const QuaternionAlgebra& q, const IsotropyOptions& opts = {}) {
  if (q.a().is_zero()) return Decision::False;
  IsotropyOptions o = opts;
  o.known_pfister = true;
  switch (is_isotropic(nrd_form(q), o)) {
    case Decision::True: return Decision::False;
    case Decision::False: return Decision::True;
    default: return Decision::Unknown;
  }
}

/// Image in M_2(K), K = F[s]/(s^2+s+a), under u -> diag(s, s+1), v -> [[0, b], [1, 0]].
inline Matrix<QuadExtElement> split_embedding(const QuadExtRing& k, const QuaternionElement& x) {
  if (!(k.c() == x.alg->a())) throw Error(ErrorKind::NoRootAvailable, "splitting ring does not contain a root of X^2+X+a");
  const FieldElement& b = x.alg->b();
  const auto& p = x.c;
  Matrix<QuadExtElement> m(2, 2, k.zero());
  m(0, 0) = {p[0], p[1]};
  m(1, 1) = {p[0] + p[1], p[1]};
  m(0, 1) = {b * p[2], b * p[3]};
  m(1, 0) = {p[2] + p[3], p[3]};
  return m;
}

inline std::string to_string(const QuaternionElement& x) {
  static const char* names[] = {"", "u", "v", "uv"};
  std::string out;
  for (std::size_t i = 0; i < 4; ++i) {
    if (x.c[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    const std::string coeff = x.c[i].to_string();
    if (i == 0) {
      out += coeff;
    } else if (x.c[i].is_one()) {
      out += names[i];
    } else {
      out += "(" + coeff + ")" + names[i];
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace charform
