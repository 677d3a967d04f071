#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "charform/gf2k.hpp"

namespace charform {

/// Polynomial over GF(2^k), coefficients lowest degree first, no trailing zeros.
using Poly = std::vector<std::uint32_t>;

namespace poly {

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline std::uint32_t lead(const Poly& p) { return p.empty() ? 0 : p.back(); }

inline Poly constant(std::uint32_t c) { return c == 0 ? Poly{} : Poly{c}; }

inline bool is_one(const Poly& p) { return p.size() == 1 && p[0] == 1; }

inline Poly add(const Poly& a, const Poly& b) {
  Poly r = a.size() >= b.size() ? a : b;
  const Poly& s = a.size() >= b.size() ? b : a;
  for (std::size_t i = 0; i < s.size(); ++i) r[i] ^= s[i];
  trim(r);
  return r;
}

inline Poly scale(const Gf2kArith& f, const Poly& a, std::uint32_t c) {
  if (c == 0) return {};
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], c);
  return r;
}

inline Poly mul(const Gf2kArith& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] ^= f.mul(a[i], b[j]);
  }
  trim(r);
  return r;
}

/// Quotient and remainder; b must be nonzero.
inline std::pair<Poly, Poly> divmod(const Gf2kArith& f, Poly a, const Poly& b) {
  if (b.empty()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  if (a.size() < b.size()) return {Poly{}, std::move(a)};
  const std::uint32_t inv_lead = f.inv(b.back());
  Poly q(a.size() - b.size() + 1, 0);
  for (int d = degree(a); d >= degree(b); d = degree(a)) {
    const std::uint32_t c = f.mul(a.back(), inv_lead);
    const std::size_t shift = static_cast<std::size_t>(d - degree(b));
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] ^= f.mul(c, b[j]);
    trim(a);
  }
  trim(q);
  return {std::move(q), std::move(a)};
}

inline Poly monic(const Gf2kArith& f, const Poly& a) {
  if (a.empty() || a.back() == 1) return a;
  return scale(f, a, f.inv(a.back()));
}

/// Monic gcd.
inline Poly gcd(const Gf2kArith& f, Poly a, Poly b) {
  while (!b.empty()) {
    Poly r = divmod(f, std::move(a), b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(f, a);
}

/// p = s^2 for some polynomial s, i.e. every odd coefficient vanishes.
inline bool is_square(const Poly& p) {
  for (std::size_t i = 1; i < p.size(); i += 2) {
    if (p[i] != 0) return false;
  }
  return true;
}

/// Square root of a polynomial square (coefficientwise Frobenius inverse).
inline Poly sqrt_of_square(const Gf2kArith& f, const Poly& p) {
  Poly r((p.size() + 1) / 2, 0);
  for (std::size_t i = 0; i < p.size(); i += 2) r[i / 2] = f.sqrt(p[i]);
  trim(r);
  return r;
}

/// Split p = e(t)^2 + t * o(t)^2; returns (e, o).
inline std::pair<Poly, Poly> even_odd_roots(const Gf2kArith& f, const Poly& p) {
  Poly e, o;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Poly& target = (i % 2 == 0) ? e : o;
    const std::size_t idx = i / 2;
    if (target.size() <= idx) target.resize(idx + 1, 0);
    target[idx] = f.sqrt(p[i]);
  }
  trim(e);
  trim(o);
  return {std::move(e), std::move(o)};
}

}  // namespace poly
}  // namespace charform
