#pragma once

#include <optional>
#include <vector>

#include "charform/decision.hpp"
#include "charform/field.hpp"
#include "charform/matrix.hpp"

namespace charform {

/// q(x) = sum_{i <= j} U_ij x_i x_j with U upper triangular.
struct RawQuadraticForm {
  Field field;
  FieldMatrix coeffs;

  static RawQuadraticForm zero(const Field& f, std::size_t n) {
    return {f, FieldMatrix(n, n, FieldElement::zero(f))};
  }

  std::size_t dimension() const { return coeffs.rows(); }

  FieldElement evaluate(const Vec& v) const {
    FieldElement s = FieldElement::zero(field);
    for (std::size_t i = 0; i < dimension(); ++i) {
      if (v[i].is_zero()) continue;
      for (std::size_t j = i; j < dimension(); ++j) {
        if (!coeffs(i, j).is_zero() && !v[j].is_zero()) s += coeffs(i, j) * v[i] * v[j];
      }
    }
    return s;
  }
};

/// B = U + U^t; alternating because the characteristic is 2.
inline FieldMatrix polar_matrix(const RawQuadraticForm& q) {
  const std::size_t n = q.dimension();
  FieldMatrix b(n, n, FieldElement::zero(q.field));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      b(i, j) = q.coeffs(i, j);
      b(j, i) = q.coeffs(i, j);
    }
  }
  return b;
}

inline FieldElement bilinear(const FieldMatrix& b, const Vec& x, const Vec& y) {
  FieldElement s = FieldElement::zero(x.front().field());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (!b(i, j).is_zero() && !y[j].is_zero()) s += x[i] * b(i, j) * y[j];
    }
  }
  return s;
}

/// Raw form of q restricted to span(basis), in the coordinates of that basis.
inline RawQuadraticForm restrict_form(const RawQuadraticForm& q, const std::vector<Vec>& basis) {
  const FieldMatrix b = polar_matrix(q);
  RawQuadraticForm r = RawQuadraticForm::zero(q.field, basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    r.coeffs(i, i) = q.evaluate(basis[i]);
    const Vec bi = mat_vec(b, basis[i]);
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      FieldElement s = FieldElement::zero(q.field);
      for (std::size_t k = 0; k < bi.size(); ++k) {
        if (!bi[k].is_zero() && !basis[j][k].is_zero()) s += bi[k] * basis[j][k];
      }
      r.coeffs(i, j) = s;
    }
  }
  return r;
}

/// Nonsingular plane a X^2 + XY + b Y^2.
struct Block {
  FieldElement a;
  FieldElement b;

  friend bool operator==(const Block& x, const Block& y) { return x.a == y.a && x.b == y.b; }
};

/// Orthogonal sum of blocks [a,b] followed by a totally singular diagonal part <c1, ..., cm>.
/// Coordinates are (x1, y1, x2, y2, ..., z1, ..., zm).
struct QuadraticForm {
  Field field;
  std::vector<Block> blocks;
  std::vector<FieldElement> diag;

  std::size_t dimension() const { return 2 * blocks.size() + diag.size(); }
  bool is_nonsingular() const { return diag.empty(); }
  bool is_totally_singular() const { return blocks.empty(); }

  FieldElement evaluate(const Vec& v) const {
    FieldElement s = FieldElement::zero(field);
    std::size_t i = 0;
    for (const auto& blk : blocks) {
      const FieldElement& x = v[i];
      const FieldElement& y = v[i + 1];
      s += blk.a * x * x + x * y + blk.b * y * y;
      i += 2;
    }
    for (const auto& c : diag) {
      s += c * v[i] * v[i];
      ++i;
    }
    return s;
  }

  RawQuadraticForm to_raw() const {
    RawQuadraticForm r = RawQuadraticForm::zero(field, dimension());
    std::size_t i = 0;
    for (const auto& blk : blocks) {
      r.coeffs(i, i) = blk.a;
      r.coeffs(i, i + 1) = FieldElement::one(field);
      r.coeffs(i + 1, i + 1) = blk.b;
      i += 2;
    }
    for (const auto& c : diag) {
      r.coeffs(i, i) = c;
      ++i;
    }
    return r;
  }

  friend bool operator==(const QuadraticForm& x, const QuadraticForm& y) {
    return x.blocks == y.blocks && x.diag == y.diag;
  }
};

/// "[a, b] + [c, d] + <e, f>"; "0" for the zero-dimensional form.
inline std::string to_string(const QuadraticForm& q) {
  std::string out;
  for (const auto& b : q.blocks) {
    if (!out.empty()) out += " + ";
    out += "[" + b.a.to_string() + ", " + b.b.to_string() + "]";
  }
  if (!q.diag.empty()) {
    if (!out.empty()) out += " + ";
    out += "<";
    for (std::size_t i = 0; i < q.diag.size(); ++i) out += (i ? ", " : "") + q.diag[i].to_string();
    out += ">";
  }
  return out.empty() ? "0" : out;
}

inline QuadraticForm block_form(const FieldElement& a, const FieldElement& b) {
  return {a.field(), {Block{a, b}}, {}};
}

inline QuadraticForm diagonal_form(const Field& f, std::vector<FieldElement> entries) {
  return {f, {}, std::move(entries)};
}

/// Normalized form with the base change: columns of `basis` are the new basis vectors in old
/// coordinates, and `to_new` maps old coordinates to new ones (q(v) = form(to_new * v)).
struct Normalization {
  QuadraticForm form;
  FieldMatrix basis;
  FieldMatrix to_new;
};

/// Symplectic-basis reduction of the polar form; the polar radical lands in the diagonal part.
inline Normalization normalize(const RawQuadraticForm& q) {
  const Field& f = q.field;
  const std::size_t n = q.dimension();
  const FieldMatrix bmat = polar_matrix(q);
  std::vector<Vec> work;
  for (std::size_t i = 0; i < n; ++i) work.push_back(unit_vec(f, n, i));

  auto dot = [](const Vec& x, const Vec& y) {
    FieldElement s = FieldElement::zero(x.front().field());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!x[i].is_zero() && !y[i].is_zero()) s += x[i] * y[i];
    }
    return s;
  };

  QuadraticForm out{f, {}, {}};
  std::vector<Vec> block_vecs;
  std::vector<Vec> diag_vecs;
  while (!work.empty()) {
    Vec e = work.front();
    work.erase(work.begin());
    const Vec be = mat_vec(bmat, e);
    std::size_t partner = work.size();
    for (std::size_t k = 0; k < work.size(); ++k) {
      if (!dot(be, work[k]).is_zero()) {
        partner = k;
        break;
      }
    }
    if (partner == work.size()) {
      out.diag.push_back(q.evaluate(e));
      diag_vecs.push_back(std::move(e));
      continue;
    }
    Vec fv = scale(dot(be, work[partner]).inv(), work[partner]);
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(partner));
    const Vec bf = mat_vec(bmat, fv);
    for (auto& w : work) {
      const FieldElement we = dot(be, w);
      const FieldElement wf = dot(bf, w);
      for (std::size_t i = 0; i < n; ++i) {
        if (!wf.is_zero() && !e[i].is_zero()) w[i] += wf * e[i];
        if (!we.is_zero() && !fv[i].is_zero()) w[i] += we * fv[i];
      }
    }
    out.blocks.push_back(Block{q.evaluate(e), q.evaluate(fv)});
    block_vecs.push_back(std::move(e));
    block_vecs.push_back(std::move(fv));
  }
  for (auto& v : diag_vecs) block_vecs.push_back(std::move(v));
  FieldMatrix basis = n == 0 ? FieldMatrix() : from_columns(f, block_vecs, n);
  FieldMatrix to_new = n == 0 ? FieldMatrix() : *inverse(basis);
  return {std::move(out), std::move(basis), std::move(to_new)};
}

inline void require_same_field(const Field& a, const Field& b) {
  if (a != b && !a->same_as(*b)) throw Error(ErrorKind::FieldMismatch, a->spec() + " vs " + b->spec());
}

inline QuadraticForm direct_sum(const QuadraticForm& q1, const QuadraticForm& q2) {
  require_same_field(q1.field, q2.field);
  QuadraticForm r = q1;
  r.blocks.insert(r.blocks.end(), q2.blocks.begin(), q2.blocks.end());
  r.diag.insert(r.diag.end(), q2.diag.begin(), q2.diag.end());
  return r;
}

/// c*q, realized blockwise as [ca, b/c] through the substitution Y -> Y/c.
inline QuadraticForm scale(const FieldElement& c, const QuadraticForm& q) {
  if (c.is_zero()) throw Error(ErrorKind::ZeroScalar, "scaling a form by zero");
  require_same_field(c.field(), q.field);
  QuadraticForm r{q.field, {}, {}};
  const FieldElement ci = c.inv();
  for (const auto& blk : q.blocks) r.blocks.push_back(Block{c * blk.a, blk.b * ci});
  for (const auto& d : q.diag) r.diag.push_back(c * d);
  return r;
}

/// <m1, ..., mr> (x) q as the orthogonal sum of the scaled copies m_i q.
inline QuadraticForm bilinear_tensor(const std::vector<FieldElement>& multipliers, const QuadraticForm& q) {
  QuadraticForm r{q.field, {}, {}};
  for (const auto& m : multipliers) {
    if (m.is_zero()) throw Error(ErrorKind::ZeroScalar, "zero multiplier in bilinear tensor");
    r = direct_sum(r, scale(m, q));
  }
  return r;
}

/// Entries of the diagonal bilinear Pfister form <<a1, ..., an>>: all subset products, in the
/// order 1, a1, a2, a1a2, a3, ...
inline std::vector<FieldElement> pfister_slots(const Field& f, const std::vector<FieldElement>& slots) {
  std::vector<FieldElement> out{FieldElement::one(f)};
  for (const auto& a : slots) {
    if (a.is_zero()) throw Error(ErrorKind::ZeroSlot, "zero Pfister slot");
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(a * out[i]);
  }
  return out;
}

/// <<a1, ..., a_{n-1}; c]] = <<a1, ..., a_{n-1}>> (x) [1, c].
inline QuadraticForm quad_pfister(const Field& f, const std::vector<FieldElement>& slots, const FieldElement& c) {
  return bilinear_tensor(pfister_slots(f, slots), block_form(FieldElement::one(f), c));
}

/// Diagonal form of the bilinear Pfister form <<a1, ..., an>>.
inline QuadraticForm quasi_pfister(const Field& f, const std::vector<FieldElement>& slots) {
  return diagonal_form(f, pfister_slots(f, slots));
}

inline unsigned arf_invariant(const QuadraticForm& q) {
  if (!q.field->is_finite()) throw Error(ErrorKind::UnsupportedField, "Arf invariant is computed over GF(2^k) only");
  if (!q.is_nonsingular()) throw Error(ErrorKind::SingularForm, "Arf invariant needs a nonsingular form");
  unsigned arf = 0;
  for (const auto& blk : q.blocks) arf ^= absolute_trace(blk.a * blk.b);
  return arf;
}

/// Complete Witt data over GF(2^k). Zero entries of the radical (and nonzero diagonal entries made
/// redundant because every element is a square) are counted in `radical_zeros`, so
/// dimension = 2 * witt_index + kernel.dimension() + radical_zeros.
struct WittInvariantsGf2k {
  std::size_t dimension = 0;
  std::size_t witt_index = 0;
  unsigned arf = 0;
  std::size_t radical_zeros = 0;
  QuadraticForm anisotropic_kernel;
};

/// Some c with absolute trace 1, so [1, c] is the anisotropic plane.
inline FieldElement trace_one_element(const Field& f) {
  for (const auto& x : all_elements(f)) {
    if (absolute_trace(x) == 1) return x;
  }
  throw Error(ErrorKind::InvalidArgument, "no trace-one element");
}

inline WittInvariantsGf2k witt_decompose_gf2k(const QuadraticForm& q) {
  if (!q.field->is_finite()) throw Error(ErrorKind::UnsupportedField, "Witt decomposition needs GF(2^k)");
  const Field& f = q.field;
  WittInvariantsGf2k w;
  w.dimension = q.dimension();
  w.anisotropic_kernel = QuadraticForm{f, {}, {}};
  unsigned arf = 0;
  for (const auto& blk : q.blocks) arf ^= absolute_trace(blk.a * blk.b);
  w.arf = arf;
  std::size_t nonzero = 0;
  for (const auto& c : q.diag) nonzero += c.is_zero() ? 0 : 1;
  if (nonzero > 0) {
    w.witt_index = q.blocks.size();
    w.anisotropic_kernel.diag.push_back(FieldElement::one(f));
    w.radical_zeros = q.diag.size() - 1;
  } else {
    w.witt_index = q.blocks.size() - (arf != 0 && !q.blocks.empty() ? 1 : 0);
    if (arf != 0) {
      w.anisotropic_kernel.blocks.push_back(Block{FieldElement::one(f), trace_one_element(f)});
    }
    w.radical_zeros = q.diag.size();
  }
  return w;
}

/// Equality of anisotropic kernels over GF(2^k).
inline bool witt_equivalent_gf2k(const QuadraticForm& q1, const QuadraticForm& q2) {
  require_same_field(q1.field, q2.field);
  const auto w1 = witt_decompose_gf2k(q1);
  const auto w2 = witt_decompose_gf2k(q2);
  return w1.anisotropic_kernel.blocks.size() == w2.anisotropic_kernel.blocks.size() &&
         w1.anisotropic_kernel.diag.size() == w2.anisotropic_kernel.diag.size();
}

/// Coordinates of c over the square field: c = alpha^2 over GF(2^k), c = alpha^2 + t beta^2
/// over GF(2^k)(t). The square root map identifies F^2-spans with F-spans of these vectors.
inline Vec square_field_coordinates(const FieldElement& c) {
  const Field& f = c.field();
  if (f->is_finite()) return {*frobenius_sqrt(c)};
  const Gf2kArith& b = f->base();
  const Poly p = poly::mul(b, c.num(), c.den());
  auto [e, o] = poly::even_odd_roots(b, p);
  return {FieldElement::from_fraction(f, e, c.den()), FieldElement::from_fraction(f, o, c.den())};
}

/// Dimension over F^2 of the span of the entries (the anisotropic dimension of <entries>).
inline std::size_t square_span_rank(const Field& f, const std::vector<FieldElement>& entries) {
  if (entries.empty()) return 0;
  std::vector<Vec> cols;
  for (const auto& c : entries) cols.push_back(square_field_coordinates(c));
  return rank(from_columns(f, cols, cols.front().size()));
}

/// Totally singular forms are isometric iff their dimensions and the F^2-spans of their entries
/// agree. Both spans are finite-dimensional over F^2 in every supported field, so the answer is
/// always decided.
inline Decision totally_singular_isometry(const QuadraticForm& d1, const QuadraticForm& d2) {
  require_same_field(d1.field, d2.field);
  if (!d1.is_totally_singular() || !d2.is_totally_singular()) {
    throw Error(ErrorKind::InvalidArgument, "totally singular isometry needs diagonal forms");
  }
  if (d1.dimension() != d2.dimension()) return Decision::False;
  std::vector<FieldElement> both = d1.diag;
  both.insert(both.end(), d2.diag.begin(), d2.diag.end());
  const std::size_t r1 = square_span_rank(d1.field, d1.diag);
  const std::size_t r2 = square_span_rank(d1.field, d2.diag);
  const std::size_t r12 = square_span_rank(d1.field, both);
  return decided(r1 == r2 && r1 == r12);
}

/// Sufficient test for isometry of nonsingular forms: [a, b] and [a', b'] are isometric when
/// ab = a'b' and a/a' is a square (substitute x -> x/l, y -> l y). True when the blocks of q1
/// can be paired off this way, Unknown otherwise. Needs no search, so it works over GF(2^k)(t).
inline Decision slot_class_isometry(const QuadraticForm& q1, const QuadraticForm& q2) {
  require_same_field(q1.field, q2.field);
  if (!q1.is_nonsingular() || !q2.is_nonsingular()) {
    throw Error(ErrorKind::SingularForm, "slot classes are compared for nonsingular forms");
  }
  if (q1.dimension() != q2.dimension()) return Decision::False;
  std::vector<bool> used(q2.blocks.size(), false);
  for (const auto& x : q1.blocks) {
    bool matched = false;
    for (std::size_t j = 0; j < q2.blocks.size() && !matched; ++j) {
      const Block& y = q2.blocks[j];
      if (used[j] || !(x.a * x.b == y.a * y.b)) continue;
      // ab = 0 makes both blocks hyperbolic planes.
      if ((x.a * x.b).is_zero() || frobenius_sqrt(x.a / y.a).has_value()) matched = used[j] = true;
    }
    if (!matched) return Decision::Unknown;
  }
  return Decision::True;
}

/// Interpretation for <1, delta>-type forms: F^2-span rank at most half the dimension.
inline bool is_quasi_hyperbolic(const QuadraticForm& d) {
  if (!d.is_totally_singular()) throw Error(ErrorKind::InvalidArgument, "quasi-hyperbolicity needs a diagonal form");
  return 2 * square_span_rank(d.field, d.diag) <= d.dimension();
}

}  // namespace charform
