#pragma once

#include <optional>
#include <random>
#include <vector>

#include "charform/algebra.hpp"

namespace charform {

/// Coordinates with respect to a fixed linearly independent family, through an invertible
/// square minor of the basis matrix.
class CoordinateMap {
 public:
  CoordinateMap() = default;

  CoordinateMap(const Field& f, std::vector<Vec> basis, std::size_t ambient) : basis_(std::move(basis)) {
    if (basis_.empty()) return;
    const FieldMatrix m = from_columns(f, basis_, ambient);
    const Echelon e = row_reduce(transpose(m));
    if (e.pivots.size() != basis_.size()) throw Error(ErrorKind::InvalidArgument, "basis vectors are dependent");
    rows_ = e.pivots;
    FieldMatrix minor(rows_.size(), rows_.size(), FieldElement::zero(f));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t j = 0; j < rows_.size(); ++j) minor(i, j) = m(rows_[i], j);
    }
    inv_ = *inverse(minor);
  }

  std::size_t dimension() const { return basis_.size(); }
  const std::vector<Vec>& basis() const { return basis_; }

  /// Coefficients c with v = sum c_j b_j, or nullopt when v is outside the span.
  std::optional<Vec> coordinates(const Vec& v) const {
    if (basis_.empty()) {
      if (is_zero_vec(v)) return Vec{};
      return std::nullopt;
    }
    Vec sub;
    for (auto r : rows_) sub.push_back(v[r]);
    const Vec c = mat_vec(inv_, sub);
    Vec back = zero_vec(v.front().field(), v.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (!c[j].is_zero()) back = add(back, scale(c[j], basis_[j]));
    }
    if (!(back == v)) return std::nullopt;
    return c;
  }

 private:
  std::vector<Vec> basis_;
  std::vector<std::size_t> rows_;
  FieldMatrix inv_;
};

/// An element of Symd(sigma) together with a half x' such that value = x' + sigma(x').
struct HalvedElement {
  AlgElem value;
  AlgElem half;
};

inline HalvedElement symmetrize(const AlgebraDescriptor& d, const AlgElem& half) {
  return {d.add(half, d.involution(half)), half};
}

inline HalvedElement add(const AlgebraDescriptor& d, const HalvedElement& x, const HalvedElement& y) {
  return {d.add(x.value, y.value), d.add(x.half, y.half)};
}

inline HalvedElement scale(const AlgebraDescriptor& d, const FieldElement& c, const HalvedElement& x) {
  return {d.scale(c, x.value), d.scale(c, x.half)};
}

/// A coordinatized subspace of the algebra: Symd(sigma) (with halves), Sym(tau), Sym(rho),
/// or one of their components.
struct InvolutionSpace {
  std::vector<AlgElem> basis;
  std::vector<AlgElem> halves;
  CoordinateMap coords;

  std::size_t dimension() const { return basis.size(); }
  bool has_halves() const { return !halves.empty() || basis.empty(); }

  AlgElem element(const AlgebraDescriptor& d, const Vec& c) const {
    AlgElem x = d.zero();
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (!c[j].is_zero()) x = d.add(x, d.scale(c[j], basis[j]));
    }
    return x;
  }

  HalvedElement halved(const AlgebraDescriptor& d, const Vec& c) const {
    if (!has_halves()) throw Error(ErrorKind::InvalidArgument, "space does not store halves");
    HalvedElement x{d.zero(), d.zero()};
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (!c[j].is_zero()) x = add(d, x, {d.scale(c[j], basis[j]), d.scale(c[j], halves[j])});
    }
    return x;
  }

  HalvedElement halved_basis(std::size_t j) const { return {basis[j], halves[j]}; }

  std::optional<Vec> coordinates(const AlgebraDescriptor& d, const AlgElem& x) const {
    return coords.coordinates(d.to_vec(x));
  }

  bool contains(const AlgebraDescriptor& d, const AlgElem& x) const { return coordinates(d, x).has_value(); }
};

inline InvolutionSpace make_space(const AlgebraDescriptor& d, std::vector<AlgElem> basis, std::vector<AlgElem> halves) {
  InvolutionSpace s;
  std::vector<Vec> vecs;
  for (const auto& b : basis) vecs.push_back(d.to_vec(b));
  s.coords = CoordinateMap(d.field(), std::move(vecs), d.vector_dim());
  s.basis = std::move(basis);
  s.halves = std::move(halves);
  return s;
}

inline InvolutionSpace make_space(const AlgebraDescriptor& d, const std::vector<HalvedElement>& elems) {
  std::vector<AlgElem> basis, halves;
  for (const auto& e : elems) {
    basis.push_back(e.value);
    halves.push_back(e.half);
  }
  return make_space(d, std::move(basis), std::move(halves));
}

/// Symd = {x + sigma(x)}, each basis vector stored with its half.
inline InvolutionSpace symmetrized_space(const AlgebraDescriptor& d) {
  SubspaceBuilder builder(d.vector_dim());
  std::vector<AlgElem> basis, halves;
  for (std::size_t j = 0; j < d.vector_dim(); ++j) {
    const AlgElem e = d.basis_element(j);
    const AlgElem img = d.add(e, d.involution(e));
    if (builder.add(d.to_vec(img))) {
      basis.push_back(img);
      halves.push_back(e);
    }
  }
  return make_space(d, std::move(basis), std::move(halves));
}

/// Sym = {x : sigma(x) = x}.
inline InvolutionSpace fixed_space(const AlgebraDescriptor& d) {
  std::vector<AlgElem> basis;
  for (const auto& v : nullspace(d.symmetrizer_matrix())) basis.push_back(d.from_vec(v));
  return make_space(d, std::move(basis), {});
}

/// The space carrying the quadratic form: Symd(sigma) for symplectic involutions, Sym(tau)
/// and Sym(rho) otherwise.
inline InvolutionSpace symmetric_space(const AlgebraDescriptor& d) {
  return d.is_symplectic() ? symmetrized_space(d) : fixed_space(d);
}

inline Vec random_coords(const Field& f, std::size_t n, std::mt19937_64& rng, int max_degree = 1) {
  Vec v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_element(f, rng, max_degree));
  return v;
}

/// Trp(x) = Trd(x').
inline FieldElement trp(const AlgebraDescriptor& d, const HalvedElement& x) { return d.trd(x.half); }

inline FieldElement srp(const AlgebraDescriptor& d, const AlgElem& x) { return prp(d, x).srp; }

/// Polar form of Srp: Trp(x)Trp(y) + Trd(x y').
inline FieldElement srp_polar(const AlgebraDescriptor& d, const HalvedElement& x, const HalvedElement& y) {
  return trp(d, x) * trp(d, y) + d.trd(d.mul(x.value, y.half));
}

/// Srp on the span of `elems`, in their coordinates.
inline RawQuadraticForm raw_srp_form(const AlgebraDescriptor& d, const std::vector<HalvedElement>& elems) {
  RawQuadraticForm q = RawQuadraticForm::zero(d.field(), elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    q.coeffs(i, i) = srp(d, elems[i].value);
    for (std::size_t j = i + 1; j < elems.size(); ++j) q.coeffs(i, j) = srp_polar(d, elems[i], elems[j]);
  }
  return q;
}

inline RawQuadraticForm srp_form(const AlgebraDescriptor& d, const InvolutionSpace& s) {
  std::vector<HalvedElement> elems;
  for (std::size_t j = 0; j < s.dimension(); ++j) elems.push_back(s.halved_basis(j));
  return raw_srp_form(d, elems);
}

/// Second coefficient Srd (coefficient of X^{n-2} in Pcrd) for the degree-4 kinds.
inline FieldElement srd(const AlgebraDescriptor& d, const AlgElem& x) {
  if (d.is_symplectic()) throw Error(ErrorKind::UnsupportedDescriptor, "Srd forms are for degree-4 algebras");
  return pcrd(d, x)[2];
}

/// Polar form of Srd: Trd(x)Trd(y) + Trd(xy), computed in the center for unitary kinds.
inline FieldElement srd_polar(const AlgebraDescriptor& d, const AlgElem& x, const AlgElem& y) {
  if (d.type() == InvolutionType::Unitary) {
    const QuadExtRing z = d.center();
    const QuadExtElement r = z.add(z.mul(d.trd_center(x), d.trd_center(y)), d.trd_center(d.mul(x, y)));
    if (!r.x1.is_zero()) throw Error(ErrorKind::CoefficientNotRational, "Srd polar value is not in F");
    return r.x0;
  }
  return d.trd(x) * d.trd(y) + d.trd(d.mul(x, y));
}

inline RawQuadraticForm raw_srd_form(const AlgebraDescriptor& d, const std::vector<AlgElem>& elems) {
  RawQuadraticForm q = RawQuadraticForm::zero(d.field(), elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    q.coeffs(i, i) = srd(d, elems[i]);
    for (std::size_t j = i + 1; j < elems.size(); ++j) q.coeffs(i, j) = srd_polar(d, elems[i], elems[j]);
  }
  return q;
}

inline RawQuadraticForm srd_form_unitary(const AlgebraDescriptor& d, const InvolutionSpace& s) {
  if (d.type() != InvolutionType::Unitary) throw Error(ErrorKind::UnsupportedDescriptor, "unitary descriptor expected");
  return raw_srd_form(d, s.basis);
}

inline RawQuadraticForm srd_form_orth(const AlgebraDescriptor& d, const InvolutionSpace& s) {
  if (d.type() != InvolutionType::Orthogonal) {
    throw Error(ErrorKind::UnsupportedDescriptor, "orthogonal descriptor expected");
  }
  return raw_srd_form(d, s.basis);
}

/// Reduced norm (constant term of Pcrd).
inline FieldElement nrd(const AlgebraDescriptor& d, const AlgElem& x) { return pcrd(d, x)[0]; }

inline bool same_square_class(const FieldElement& a, const FieldElement& b) {
  if (a.is_zero() || b.is_zero()) throw Error(ErrorKind::DivisionByZero, "square classes of nonzero elements only");
  return frobenius_sqrt(a / b).has_value();
}

/// det(rho) as a representative of F^x / F^x2, with the witnesses used.
struct SquareClass {
  FieldElement representative;
  std::vector<AlgElem> witnesses;
};

/// Nrd of invertible elements of Symd(rho), checked to agree on `witnesses` choices.
inline SquareClass det_orthogonal(const AlgebraDescriptor& d, std::mt19937_64& rng, std::size_t witnesses = 3,
                                  std::size_t budget = 4096) {
  if (d.type() != InvolutionType::Orthogonal) throw Error(ErrorKind::UnsupportedDescriptor, "orthogonal descriptor expected");
  const InvolutionSpace alt = symmetrized_space(d);
  std::optional<SquareClass> out;
  for (std::size_t attempt = 0; attempt < budget && (!out || out->witnesses.size() < witnesses); ++attempt) {
    const AlgElem w = alt.element(d, random_coords(d.field(), alt.dimension(), rng));
    const FieldElement n = nrd(d, w);
    if (n.is_zero()) continue;
    if (!out) {
      out = SquareClass{n, {w}};
    } else {
      if (!same_square_class(n, out->representative)) {
        throw Error(ErrorKind::InvalidArgument, "Nrd classes of Symd(rho) disagree");
      }
      out->witnesses.push_back(w);
    }
  }
  if (!out || out->witnesses.size() < witnesses) throw Error(ErrorKind::NoInvertibleWitness, "no invertible element of Symd(rho) found");
  return *out;
}

}  // namespace charform
