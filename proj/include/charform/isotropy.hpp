#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "charform/quadform.hpp"

namespace charform {

struct IsotropyOptions {
  /// The form is known to be a (scalar multiple of a) quadratic Pfister form, so any isotropic
  /// vector proves hyperbolicity.
  bool known_pfister = false;
  /// Largest polynomial degree of a searched vector entry.
  int degree_budget = 8;
  /// Largest number of candidate vectors examined by the search.
  std::size_t search_budget = std::size_t{1} << 18;
  /// Largest number of degree patterns examined by the anisotropy certificate.
  std::size_t certificate_budget = std::size_t{1} << 22;
};

namespace detail {

/// c * x_i * x_j with polynomial c, after clearing denominators.
struct PolyMonomial {
  std::size_t i;
  std::size_t j;
  Poly coeff;
};

inline Poly poly_lcm(const Gf2kArith& b, const Poly& x, const Poly& y) {
  const Poly g = poly::gcd(b, x, y);
  return poly::divmod(b, poly::mul(b, x, y), g).first;
}

/// Monomials of a RatFunc form multiplied by the lcm of all denominators (which preserves
/// isotropy).
inline std::vector<PolyMonomial> polynomial_monomials(const QuadraticForm& q) {
  const Gf2kArith& b = q.field->base();
  Poly common{1};
  auto absorb = [&](const FieldElement& c) { common = poly_lcm(b, common, c.den()); };
  for (const auto& blk : q.blocks) {
    absorb(blk.a);
    absorb(blk.b);
  }
  for (const auto& c : q.diag) absorb(c);
  auto clear = [&](const FieldElement& c) {
    return poly::mul(b, c.num(), poly::divmod(b, common, c.den()).first);
  };
  std::vector<PolyMonomial> out;
  std::size_t v = 0;
  for (const auto& blk : q.blocks) {
    if (!blk.a.is_zero()) out.push_back({v, v, clear(blk.a)});
    out.push_back({v, v + 1, common});
    if (!blk.b.is_zero()) out.push_back({v + 1, v + 1, clear(blk.b)});
    v += 2;
  }
  for (const auto& c : q.diag) {
    if (!c.is_zero()) out.push_back({v, v, clear(c)});
    ++v;
  }
  return out;
}

inline Poly reverse_poly(const Poly& p) { return Poly(p.rbegin(), p.rend()); }

/// The form with every coefficient c(t) replaced by c(1/t).
inline QuadraticForm invert_variable(const QuadraticForm& q) {
  const Field& f = q.field;
  auto inv = [&](const FieldElement& c) {
    if (c.is_zero()) return c;
    const int dp = poly::degree(c.num());
    const int dq = poly::degree(c.den());
    Poly num = reverse_poly(c.num());
    Poly den = reverse_poly(c.den());
    Poly shift(static_cast<std::size_t>(std::abs(dq - dp)) + 1, 0);
    shift.back() = 1;
    if (dq > dp) num = poly::mul(f->base(), num, shift);
    if (dp > dq) den = poly::mul(f->base(), den, shift);
    return FieldElement::from_fraction(f, num, den);
  };
  QuadraticForm r{f, {}, {}};
  for (const auto& blk : q.blocks) r.blocks.push_back({inv(blk.a), inv(blk.b)});
  for (const auto& c : q.diag) r.diag.push_back(inv(c));
  return r;
}

/// Leading-term certificate at the degree valuation. Assume a primitive polynomial zero exists
/// and let d_i be the degrees of its entries. The monomials of maximal degree D must cancel, so
/// the leading form sum lambda_m l_i l_j over those monomials has a zero with every l_i nonzero.
/// When every variable carries a nonzero square coefficient, the degrees of the variables that
/// reach D lie in a window of width max(deg c) - min(deg c), so finitely many patterns cover
/// every case. Returns true when no pattern admits cancellation.
inline bool degree_certificate(const std::vector<PolyMonomial>& mons, std::size_t n, const Gf2kArith& b,
                               std::size_t budget) {
  if (n == 0) return false;
  std::vector<bool> has_square(n, false);
  int emax = 0;
  int emin = 1 << 30;
  for (const auto& m : mons) {
    if (m.i == m.j) has_square[m.i] = true;
    emax = std::max(emax, poly::degree(m.coeff));
    emin = std::min(emin, poly::degree(m.coeff));
  }
  for (bool h : has_square) {
    if (!h) return false;
  }
  const int width = emax - emin;
  const std::size_t radix = static_cast<std::size_t>(width) + 2;
  std::size_t patterns = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (patterns > budget / radix) return false;
    patterns *= radix;
  }

  std::vector<int> deg(n, -1);
  for (std::size_t code = 1; code < patterns; ++code) {
    std::size_t c = code;
    int lowest = 1 << 30;
    for (std::size_t i = 0; i < n; ++i) {
      deg[i] = static_cast<int>(c % radix) - 1;
      c /= radix;
      if (deg[i] >= 0) lowest = std::min(lowest, deg[i]);
    }
    if (lowest != 0) continue;
    int top = -1;
    for (const auto& m : mons) {
      if (deg[m.i] < 0 || deg[m.j] < 0) continue;
      top = std::max(top, poly::degree(m.coeff) + deg[m.i] + deg[m.j]);
    }
    std::vector<const PolyMonomial*> attaining;
    std::vector<bool> participates(n, false);
    for (const auto& m : mons) {
      if (deg[m.i] < 0 || deg[m.j] < 0) continue;
      if (poly::degree(m.coeff) + deg[m.i] + deg[m.j] == top) {
        attaining.push_back(&m);
        participates[m.i] = true;
        participates[m.j] = true;
      }
    }
    bool complete = true;
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < n; ++i) {
      if (deg[i] >= 0 && !participates[i]) complete = false;
      if (participates[i]) vars.push_back(i);
    }
    if (!complete) continue;
    const std::uint32_t units = b.order() - 1;
    std::size_t choices = 1;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (choices > budget / units) return false;
      choices *= units;
    }
    std::vector<std::uint32_t> lead(n, 1);
    for (std::size_t ch = 0; ch < choices; ++ch) {
      std::size_t cc = ch;
      for (auto v : vars) {
        lead[v] = static_cast<std::uint32_t>(cc % units) + 1;
        cc /= units;
      }
      std::uint32_t sum = 0;
      for (const auto* m : attaining) sum ^= b.mul(poly::lead(m->coeff), b.mul(lead[m->i], lead[m->j]));
      if (sum == 0) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Proof of anisotropy over GF(2^k)(t) via the leading-term test at t = infinity and at t = 0.
inline bool certify_anisotropic(const QuadraticForm& q, std::size_t budget = std::size_t{1} << 22) {
  if (q.field->is_finite()) throw Error(ErrorKind::UnsupportedField, "certificate is for rational function fields");
  const Gf2kArith& b = q.field->base();
  if (detail::degree_certificate(detail::polynomial_monomials(q), q.dimension(), b, budget)) return true;
  const QuadraticForm rev = detail::invert_variable(q);
  return detail::degree_certificate(detail::polynomial_monomials(rev), rev.dimension(), b, budget);
}

/// Bounded search for a nonzero polynomial vector v with q(v) = 0, by increasing entry degree.
inline std::optional<Vec> find_isotropic_vector(const QuadraticForm& q, const IsotropyOptions& opts = {}) {
  const Field& f = q.field;
  const std::size_t n = q.dimension();
  if (n == 0) return std::nullopt;
  if (f->is_finite()) {
    const std::uint64_t order = f->base().order();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (total > opts.search_budget / order) throw Error(ErrorKind::BudgetExceeded, "exhaustive search too large");
      total *= order;
    }
    Vec v = zero_vec(f, n);
    for (std::uint64_t code = 1; code < total; ++code) {
      std::uint64_t c = code;
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = FieldElement::from_int(f, static_cast<std::uint32_t>(c % order));
        c /= order;
      }
      if (q.evaluate(v).is_zero()) return v;
    }
    return std::nullopt;
  }
  const Gf2kArith& b = f->base();
  const auto mons = detail::polynomial_monomials(q);
  const std::uint64_t q_order = b.order();
  std::size_t spent = 0;
  for (int d = 0; d <= opts.degree_budget; ++d) {
    std::uint64_t per_entry = 1;
    for (int k = 0; k <= d; ++k) per_entry *= q_order;
    std::uint64_t total = 1;
    bool too_big = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (total > (opts.search_budget - spent) / per_entry) {
        too_big = true;
        break;
      }
      total *= per_entry;
    }
    if (too_big) break;
    spent += total;
    std::vector<Poly> entries(n);
    for (std::uint64_t code = 1; code < total; ++code) {
      std::uint64_t c = code;
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t e = c % per_entry;
        c /= per_entry;
        Poly p;
        while (e != 0) {
          p.push_back(static_cast<std::uint32_t>(e % q_order));
          e /= q_order;
        }
        poly::trim(p);
        entries[i] = std::move(p);
      }
      Poly value;
      for (const auto& m : mons) {
        if (entries[m.i].empty() || entries[m.j].empty()) continue;
        value = poly::add(value, poly::mul(b, m.coeff, poly::mul(b, entries[m.i], entries[m.j])));
      }
      if (value.empty()) {
        Vec v;
        for (auto& p : entries) v.push_back(FieldElement::from_fraction(f, p));
        return v;
      }
    }
  }
  return std::nullopt;
}

/// Decided over GF(2^k) by the Witt data; over GF(2^k)(t) by an explicit zero (True) or an
/// anisotropy certificate (False), else Unknown.
inline Decision is_isotropic(const QuadraticForm& q, const IsotropyOptions& opts = {}) {
  if (q.field->is_finite()) {
    const auto w = witt_decompose_gf2k(q);
    return decided(w.witt_index > 0 || w.radical_zeros > 0);
  }
  if (find_isotropic_vector(q, opts)) return Decision::True;
  if (certify_anisotropic(q, opts.certificate_budget)) return Decision::False;
  return Decision::Unknown;
}

inline Decision is_hyperbolic(const QuadraticForm& q, const IsotropyOptions& opts = {}) {
  if (!q.is_nonsingular()) throw Error(ErrorKind::SingularForm, "hyperbolicity needs a nonsingular form");
  if (q.dimension() == 0) return Decision::True;
  if (q.field->is_finite()) return decided(arf_invariant(q) == 0);
  if (certify_anisotropic(q, opts.certificate_budget)) return Decision::False;
  if (find_isotropic_vector(q, opts) && (q.dimension() == 2 || opts.known_pfister)) return Decision::True;
  return Decision::Unknown;
}

}  // namespace charform
