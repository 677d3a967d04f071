#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "charform/quaternion.hpp"

namespace charform {

enum class AlgebraKind { SplitSymp, Index2Symp, UnitaryExchange, UnitaryEtale, Orthogonal };
enum class InvolutionType { Symplectic, Unitary, Orthogonal };

inline const char* algebra_kind_name(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::SplitSymp: return "split_symp";
    case AlgebraKind::Index2Symp: return "index2_symp";
    case AlgebraKind::UnitaryExchange: return "unitary_exchange";
    case AlgebraKind::UnitaryEtale: return "unitary_etale";
    case AlgebraKind::Orthogonal: return "orthogonal";
  }
  return "?";
}

inline const char* involution_type_name(InvolutionType t) {
  switch (t) {
    case InvolutionType::Symplectic: return "symplectic";
    case InvolutionType::Unitary: return "unitary";
    case InvolutionType::Orthogonal: return "orthogonal";
  }
  return "?";
}

/// A matrix entry: a scalar (slot 0), an element x0 + x1 s of the center Z (slots 0-1), or a
/// quaternion (slots 0-3). Unused slots stay zero.
using Entry = std::array<FieldElement, 4>;

/// A 4 x 4 matrix over the coefficient algebra.
using AlgElem = Matrix<Entry>;

class AlgebraDescriptor;
using Algebra = std::shared_ptr<const AlgebraDescriptor>;

/// M_4(D) with D = Q (symplectic), Z = F[s]/(s^2+s+c) (unitary) or F (orthogonal), and the
/// involution x -> G^-1 conj(x)^t G for a diagonal G with entries in F. The exchange involution
/// on E x E^op is M_4(F x F) with F x F = F[s]/(s^2+s) and the swap as conj.
class AlgebraDescriptor {
 public:
  static constexpr std::size_t kSize = 4;

  static Algebra split_symp(const Field& f) {
    const FieldElement one = FieldElement::one(f);
    return make(AlgebraKind::SplitSymp, f, split_quaternions(f), FieldElement::zero(f), {one, one, one, one});
  }

  /// Adjoint involution of the hermitian form <1, u1, u2, u3> over Q.
  static Algebra index2_symp(const Quaternions& q, const FieldElement& u1, const FieldElement& u2,
                             const FieldElement& u3) {
    const Field& f = q->field();
    for (const auto* u : {&u1, &u2, &u3}) {
      require_same_field(f, u->field());
      if (u->is_zero()) throw Error(ErrorKind::InvalidArgument, "hermitian form entries must be nonzero");
    }
    return make(AlgebraKind::Index2Symp, f, q, FieldElement::zero(f), {FieldElement::one(f), u1, u2, u3});
  }

  static Algebra unitary_exchange(const Field& f) {
    const FieldElement one = FieldElement::one(f);
    return make(AlgebraKind::UnitaryExchange, f, nullptr, FieldElement::zero(f), {one, one, one, one});
  }

  static Algebra unitary_etale(const Field& f, const FieldElement& c, const std::vector<FieldElement>& g) {
    require_same_field(f, c.field());
    if (solve_artin_schreier(c).solved()) {
      throw Error(ErrorKind::InvalidArgument, "X^2+X+c splits over F; use unitary_exchange");
    }
    check_gram(f, g);
    return make(AlgebraKind::UnitaryEtale, f, nullptr, c, g);
  }

  static Algebra orthogonal(const Field& f, const std::vector<FieldElement>& g) {
    check_gram(f, g);
    return make(AlgebraKind::Orthogonal, f, nullptr, FieldElement::zero(f), g);
  }

  AlgebraKind kind() const { return kind_; }
  InvolutionType type() const {
    switch (kind_) {
      case AlgebraKind::SplitSymp:
      case AlgebraKind::Index2Symp: return InvolutionType::Symplectic;
      case AlgebraKind::UnitaryExchange:
      case AlgebraKind::UnitaryEtale: return InvolutionType::Unitary;
      default: return InvolutionType::Orthogonal;
    }
  }
  bool is_symplectic() const { return type() == InvolutionType::Symplectic; }
  const Field& field() const { return field_; }
  const Quaternions& quaternions() const { return quat_; }
  /// The constant c of the center F[s]/(s^2+s+c) (unitary kinds).
  const FieldElement& center_c() const { return c_; }
  QuadExtRing center() const { return QuadExtRing(field_, c_); }
  /// Diagonal of the Gram matrix G.
  const std::vector<FieldElement>& gram() const { return g_; }
  /// Dimension of the coefficient algebra over F.
  std::size_t coeff_dim() const { return coeff_dim_; }
  /// Degree of the algebra (8 for the symplectic kinds, 4 otherwise).
  std::size_t degree() const { return is_symplectic() ? 8 : 4; }
  std::size_t vector_dim() const { return kSize * kSize * coeff_dim_; }

  Entry entry_zero() const {
    const FieldElement z = FieldElement::zero(field_);
    return {z, z, z, z};
  }
  Entry entry_scalar(const FieldElement& x) const {
    Entry e = entry_zero();
    e[0] = x;
    return e;
  }
  static bool entry_is_zero(const Entry& e) {
    return e[0].is_zero() && e[1].is_zero() && e[2].is_zero() && e[3].is_zero();
  }
  static Entry entry_add(const Entry& x, const Entry& y) {
    return {x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]};
  }
  static Entry entry_scale(const FieldElement& c, const Entry& x) { return {c * x[0], c * x[1], c * x[2], c * x[3]}; }

  Entry entry_mul(const Entry& x, const Entry& y) const {
    if (entry_is_zero(x) || entry_is_zero(y)) return entry_zero();
    switch (coeff_dim_) {
      case 1: return entry_scalar(x[0] * y[0]);
      case 2: {
        const auto p = center().mul({x[0], x[1]}, {y[0], y[1]});
        Entry e = entry_zero();
        e[0] = p.x0;
        e[1] = p.x1;
        return e;
      }
      default:
        if (x[1].is_zero() && x[2].is_zero() && x[3].is_zero()) return entry_scale(x[0], y);
        if (y[1].is_zero() && y[2].is_zero() && y[3].is_zero()) return entry_scale(y[0], x);
        return q_mul_coords(quat_->a(), quat_->b(), x, y);
    }
  }

  /// Canonical involution of Q, the automorphism s -> s+1 of Z, or the identity of F.
  Entry entry_conj(const Entry& x) const {
    if (coeff_dim_ == 1) return x;
    return {x[0] + x[1], x[1], x[2], x[3]};
  }

  AlgElem zero() const { return AlgElem(kSize, kSize, entry_zero()); }
  AlgElem scalar(const FieldElement& c) const {
    AlgElem m = zero();
    for (std::size_t i = 0; i < kSize; ++i) m(i, i) = entry_scalar(c);
    return m;
  }
  AlgElem one() const { return scalar(FieldElement::one(field_)); }

  void check_shape(const AlgElem& x) const {
    if (x.rows() != kSize || x.cols() != kSize) throw Error(ErrorKind::ShapeMismatch, "algebra elements are 4x4");
  }

  AlgElem add(const AlgElem& x, const AlgElem& y) const {
    check_shape(x);
    check_shape(y);
    AlgElem r = x;
    for (std::size_t i = 0; i < kSize; ++i) {
      for (std::size_t j = 0; j < kSize; ++j) r(i, j) = entry_add(x(i, j), y(i, j));
    }
    return r;
  }

  AlgElem scale(const FieldElement& c, const AlgElem& x) const {
    AlgElem r = x;
    for (std::size_t i = 0; i < kSize; ++i) {
      for (std::size_t j = 0; j < kSize; ++j) r(i, j) = entry_scale(c, x(i, j));
    }
    return r;
  }

  AlgElem mul(const AlgElem& x, const AlgElem& y) const {
    check_shape(x);
    check_shape(y);
    AlgElem r = zero();
    for (std::size_t i = 0; i < kSize; ++i) {
      for (std::size_t k = 0; k < kSize; ++k) {
        if (entry_is_zero(x(i, k))) continue;
        for (std::size_t j = 0; j < kSize; ++j) {
          if (!entry_is_zero(y(k, j))) r(i, j) = entry_add(r(i, j), entry_mul(x(i, k), y(k, j)));
        }
      }
    }
    return r;
  }

  /// sigma(x)_ij = g_i^-1 conj(x_ji) g_j.
  AlgElem involution(const AlgElem& x) const {
    check_shape(x);
    AlgElem r = zero();
    for (std::size_t i = 0; i < kSize; ++i) {
      for (std::size_t j = 0; j < kSize; ++j) {
        if (entry_is_zero(x(j, i))) continue;
        r(i, j) = entry_scale(g_inv_[i] * g_[j], entry_conj(x(j, i)));
      }
    }
    return r;
  }

  /// x = c * 1 for some c in F.
  std::optional<FieldElement> scalar_value(const AlgElem& x) const {
    const FieldElement c = x(0, 0)[0];
    return x == scalar(c) ? std::optional<FieldElement>(c) : std::nullopt;
  }

  Vec to_vec(const AlgElem& x) const {
    check_shape(x);
    Vec v;
    v.reserve(vector_dim());
    for (std::size_t i = 0; i < kSize; ++i) {
      for (std::size_t j = 0; j < kSize; ++j) {
        for (std::size_t k = 0; k < coeff_dim_; ++k) v.push_back(x(i, j)[k]);
      }
    }
    return v;
  }

  AlgElem from_vec(const Vec& v) const {
    if (v.size() != vector_dim()) throw Error(ErrorKind::ShapeMismatch, "coordinate vector has the wrong length");
    AlgElem x = zero();
    std::size_t p = 0;
    for (std::size_t i = 0; i < kSize; ++i) {
      for (std::size_t j = 0; j < kSize; ++j) {
        for (std::size_t k = 0; k < coeff_dim_; ++k) x(i, j)[k] = v[p++];
      }
    }
    return x;
  }

  AlgElem basis_element(std::size_t index) const { return from_vec(unit_vec(field_, vector_dim(), index)); }

  /// Reduced trace of the center-valued kind: sum of diagonal entries as an element of Z.
  QuadExtElement trd_center(const AlgElem& x) const {
    QuadExtElement s = center().zero();
    for (std::size_t i = 0; i < kSize; ++i) s = center().add(s, {x(i, i)[0], x(i, i)[1]});
    return s;
  }

  /// Reduced trace Trd_A(x) in F.
  FieldElement trd(const AlgElem& x) const {
    FieldElement s = FieldElement::zero(field_);
    switch (type()) {
      case InvolutionType::Symplectic:
        for (std::size_t i = 0; i < kSize; ++i) s += x(i, i)[1];
        return s;
      case InvolutionType::Orthogonal:
        for (std::size_t i = 0; i < kSize; ++i) s += x(i, i)[0];
        return s;
      default: {
        const QuadExtElement z = trd_center(x);
        if (!z.x1.is_zero()) throw Error(ErrorKind::CoefficientNotRational, "reduced trace is not in F");
        return z.x0;
      }
    }
  }

  /// Matrix of the F-linear map x -> x + sigma(x) in the coordinates of to_vec.
  FieldMatrix symmetrizer_matrix() const {
    const std::size_t n = vector_dim();
    FieldMatrix m(n, n, FieldElement::zero(field_));
    for (std::size_t j = 0; j < n; ++j) {
      const AlgElem e = basis_element(j);
      const Vec img = to_vec(add(e, involution(e)));
      for (std::size_t i = 0; i < n; ++i) m(i, j) = img[i];
    }
    return m;
  }

 private:
  AlgebraDescriptor(AlgebraKind kind, Field f, Quaternions q, FieldElement c, std::vector<FieldElement> g)
      : kind_(kind), field_(std::move(f)), quat_(std::move(q)), c_(std::move(c)), g_(std::move(g)) {
    coeff_dim_ = quat_ ? 4 : (type() == InvolutionType::Unitary ? 2 : 1);
    for (const auto& x : g_) g_inv_.push_back(x.inv());
  }

  static void check_gram(const Field& f, const std::vector<FieldElement>& g) {
    if (g.size() != kSize) throw Error(ErrorKind::InvalidArgument, "Gram diagonal needs 4 entries");
    for (const auto& x : g) {
      require_same_field(f, x.field());
      if (x.is_zero()) throw Error(ErrorKind::InvalidArgument, "Gram entries must be nonzero");
    }
  }

  static Algebra make(AlgebraKind kind, const Field& f, Quaternions q, FieldElement c, std::vector<FieldElement> g) {
    Algebra a(new AlgebraDescriptor(kind, f, std::move(q), std::move(c), std::move(g)));
    a->validate();
    return a;
  }

  void validate() const {
    for (std::size_t j = 0; j < vector_dim(); ++j) {
      const AlgElem e = basis_element(j);
      if (!(involution(involution(e)) == e)) throw Error(ErrorKind::InvalidArgument, "the map is not an involution");
    }
    if (is_symplectic()) {
      // 1 = x + sigma(x) for x = u * identity; confirm through the general linear solve.
      const auto sol = solve(symmetrizer_matrix(), to_vec(one()));
      if (!sol) throw Error(ErrorKind::InvalidArgument, "1 is not symmetrized; involution is not symplectic");
    }
  }

  AlgebraKind kind_;
  Field field_;
  Quaternions quat_;
  FieldElement c_;
  std::vector<FieldElement> g_;
  std::vector<FieldElement> g_inv_;
  std::size_t coeff_dim_ = 1;
};

/// Polynomial with F coefficients, lowest degree first.
using FieldPoly = std::vector<FieldElement>;

/// Reduced characteristic polynomial (degree 8 for the symplectic kinds, 4 otherwise). For
/// the exchange kind it is the characteristic polynomial of the E-component (s -> 1).
inline FieldPoly pcrd(const AlgebraDescriptor& d, const AlgElem& x) {
  d.check_shape(x);
  const std::size_t n = AlgebraDescriptor::kSize;
  const Field& f = d.field();
  if (d.type() == InvolutionType::Orthogonal) {
    FieldMatrix m(n, n, FieldElement::zero(f));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = x(i, j)[0];
    }
    return charpoly(FieldRing(f), m);
  }
  if (d.kind() == AlgebraKind::UnitaryExchange) {
    FieldMatrix m(n, n, FieldElement::zero(f));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = x(i, j)[0] + x(i, j)[1];
    }
    return charpoly(FieldRing(f), m);
  }
  std::vector<QuadExtElement> coeffs;
  if (d.type() == InvolutionType::Unitary) {
    const QuadExtRing z = d.center();
    Matrix<QuadExtElement> m(n, n, z.zero());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = {x(i, j)[0], x(i, j)[1]};
    }
    coeffs = charpoly(z, m);
  } else {
    const QuadExtRing k = d.quaternions()->splitting_ring();
    Matrix<QuadExtElement> m(2 * n, 2 * n, k.zero());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto blk = split_embedding(k, QuaternionElement{d.quaternions(), x(i, j)});
        for (std::size_t r = 0; r < 2; ++r) {
          for (std::size_t c = 0; c < 2; ++c) m(2 * i + r, 2 * j + c) = blk(r, c);
        }
      }
    }
    coeffs = charpoly(k, m);
  }
  FieldPoly out;
  for (const auto& c : coeffs) {
    if (!c.x1.is_zero()) throw Error(ErrorKind::CoefficientNotRational, "reduced characteristic polynomial is not over F");
    out.push_back(c.x0);
  }
  return out;
}

/// Reduced Pfaffian data of a symmetrized element: Prp^2 = Pcrd, Prp = X^4 + Trp X^3 + Srp X^2
/// + U X + Nrp (signs vanish in characteristic 2).
struct PfaffianData {
  FieldPoly prp;
  FieldElement trp;
  FieldElement srp;
  FieldElement u;
  FieldElement nrp;
};

inline PfaffianData prp(const AlgebraDescriptor& d, const AlgElem& x) {
  if (!d.is_symplectic()) throw Error(ErrorKind::UnsupportedDescriptor, "Pfaffians need a symplectic involution");
  const FieldPoly p = pcrd(d, x);
  FieldPoly root;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i % 2 == 1) {
      if (!p[i].is_zero()) throw Error(ErrorKind::NotPfaffian, "odd coefficient of Pcrd is nonzero");
      continue;
    }
    const auto r = frobenius_sqrt(p[i]);
    if (!r) throw Error(ErrorKind::NotPfaffian, "even coefficient of Pcrd is not a square");
    root.push_back(*r);
  }
  // Re-verify Prp^2 = Pcrd.
  const Field& f = d.field();
  FieldPoly sq(2 * root.size() - 1, FieldElement::zero(f));
  for (std::size_t i = 0; i < root.size(); ++i) {
    for (std::size_t j = 0; j < root.size(); ++j) sq[i + j] += root[i] * root[j];
  }
  if (sq != p) throw Error(ErrorKind::NotPfaffian, "Prp^2 differs from Pcrd");
  return {root, root[3], root[2], root[1], root[0]};
}

/// p(x) in the algebra, by Horner's rule.
inline AlgElem poly_at(const AlgebraDescriptor& d, const FieldPoly& p, const AlgElem& x) {
  AlgElem acc = d.zero();
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = d.add(d.mul(acc, x), d.scalar(*it));
  return acc;
}

inline std::string to_string(const AlgebraDescriptor& d, const AlgElem& x) {
  std::string out = "[";
  for (std::size_t i = 0; i < AlgebraDescriptor::kSize; ++i) {
    out += i == 0 ? "[" : ", [";
    for (std::size_t j = 0; j < AlgebraDescriptor::kSize; ++j) {
      if (j > 0) out += ", ";
      const Entry& e = x(i, j);
      if (d.coeff_dim() == 4) {
        out += to_string(QuaternionElement{d.quaternions(), e});
      } else if (d.coeff_dim() == 2) {
        out += e[1].is_zero() ? e[0].to_string() : e[0].to_string() + " + (" + e[1].to_string() + ")s";
      } else {
        out += e[0].to_string();
      }
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace charform
