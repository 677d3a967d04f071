#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "charform/error.hpp"

namespace charform {

/// Degree of a GF(2)[x] polynomial packed into bits; -1 for zero.
inline int gf2_poly_degree(std::uint32_t p) {
  return p == 0 ? -1 : 31 - std::countl_zero(p);
}

/// Remainder of a modulo b in GF(2)[x].
inline std::uint32_t gf2_poly_mod(std::uint32_t a, std::uint32_t b) {
  const int db = gf2_poly_degree(b);
  for (int da = gf2_poly_degree(a); da >= db; da = gf2_poly_degree(a)) {
    a ^= b << (da - db);
  }
  return a;
}

/// Trial division by every polynomial of degree 1..deg/2.
inline bool is_irreducible_gf2(std::uint32_t p) {
  const int d = gf2_poly_degree(p);
  if (d < 1) return false;
  for (int e = 1; 2 * e <= d; ++e) {
    for (std::uint32_t q = 1u << e; q < (2u << e); ++q) {
      if (gf2_poly_mod(p, q) == 0) return false;
    }
  }
  return true;
}

/// Lexicographically least irreducible polynomial of degree k (top bit included).
inline std::uint32_t default_modulus(unsigned k) {
  if (k == 0 || k > 16) throw Error(ErrorKind::InvalidArgument, "GF(2^k) needs 1 <= k <= 16");
  for (std::uint32_t p = 1u << k; p < (2u << k); ++p) {
    if (is_irreducible_gf2(p)) return p;
  }
  throw Error(ErrorKind::InvalidArgument, "no irreducible polynomial found");
}

/// Residue arithmetic in GF(2)[x]/(m) with residues packed into the low k bits.
class Gf2kArith {
 public:
  Gf2kArith() : Gf2kArith(1, 0b11) {}

  Gf2kArith(unsigned degree, std::uint32_t modulus) : k_(degree), modulus_(modulus) {
    if (degree == 0 || degree > 16) {
      throw Error(ErrorKind::InvalidArgument, "GF(2^k) needs 1 <= k <= 16");
    }
    if (gf2_poly_degree(modulus) != static_cast<int>(degree)) {
      throw Error(ErrorKind::InvalidArgument, "modulus degree does not match k");
    }
    if (!is_irreducible_gf2(modulus)) {
      throw Error(ErrorKind::InvalidArgument, "modulus is not irreducible over GF(2)");
    }
  }

  unsigned degree() const { return k_; }
  std::uint32_t modulus() const { return modulus_; }
  std::uint32_t order() const { return 1u << k_; }
  std::uint32_t mask() const { return order() - 1; }

  std::uint32_t mul(std::uint32_t x, std::uint32_t y) const {
    std::uint32_t r = 0;
    const std::uint32_t top = 1u << k_;
    while (y != 0) {
      if (y & 1u) r ^= x;
      y >>= 1;
      x <<= 1;
      if (x & top) x ^= modulus_;
    }
    return r;
  }

  std::uint32_t square(std::uint32_t x) const { return mul(x, x); }

  std::uint32_t pow(std::uint32_t x, std::uint64_t e) const {
    std::uint32_t r = 1;
    while (e != 0) {
      if (e & 1u) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }

  std::uint32_t inv(std::uint32_t x) const {
    if (x == 0) throw Error(ErrorKind::DivisionByZero, "inverse of zero in GF(2^k)");
    return pow(x, order() - 2);
  }

  /// x^(2^(k-1)), the inverse of the Frobenius.
  std::uint32_t sqrt(std::uint32_t x) const {
    for (unsigned i = 1; i < k_; ++i) x = square(x);
    return x;
  }

  /// Absolute trace x + x^2 + ... + x^(2^(k-1)).
  std::uint32_t trace(std::uint32_t x) const {
    std::uint32_t t = 0;
    for (unsigned i = 0; i < k_; ++i) {
      t ^= x;
      x = square(x);
    }
    return t;
  }

  bool operator==(const Gf2kArith& o) const { return k_ == o.k_ && modulus_ == o.modulus_; }

 private:
  unsigned k_;
  std::uint32_t modulus_;
};

/// Dense GF(2) solver: rows are equations over `cols` unknowns with a right-hand side bit.
/// Returns one solution or nullopt when the system is inconsistent.
inline std::optional<std::vector<std::uint8_t>> solve_gf2_system(
    std::vector<std::vector<std::uint8_t>> rows, std::vector<std::uint8_t> rhs, std::size_t cols) {
  const std::size_t nrows = rows.size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < nrows; ++c) {
    std::size_t p = r;
    while (p < nrows && rows[p][c] == 0) ++p;
    if (p == nrows) continue;
    std::swap(rows[p], rows[r]);
    std::swap(rhs[p], rhs[r]);
    for (std::size_t i = 0; i < nrows; ++i) {
      if (i != r && rows[i][c] != 0) {
        for (std::size_t j = c; j < cols; ++j) rows[i][j] ^= rows[r][j];
        rhs[i] ^= rhs[r];
      }
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < nrows; ++i) {
    if (rhs[i] != 0) return std::nullopt;
  }
  std::vector<std::uint8_t> x(cols, 0);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
  return x;
}

}  // namespace charform
