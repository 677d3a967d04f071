#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "charform/gf2k.hpp"
#include "charform/poly.hpp"

namespace charform {

/// GF(2^k) or GF(2^k)(t). Immutable; shared between all of its elements.
class FieldDescriptor {
 public:
  enum class Kind { Gf2k, RatFunc };

  FieldDescriptor(Kind kind, Gf2kArith base, std::string variable, bool explicit_modulus)
      : kind_(kind), base_(base), variable_(std::move(variable)), explicit_modulus_(explicit_modulus) {}

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Gf2k; }
  const Gf2kArith& base() const { return base_; }
  const std::string& variable() const { return variable_; }

  /// Text form accepted by parse_field ("gf2", "gf2k:3", "gf2k:3:0xb", "ratfunc:gf2:t").
  std::string spec() const {
    std::ostringstream os;
    if (kind_ == Kind::RatFunc) os << "ratfunc:";
    if (base_.degree() == 1) {
      os << "gf2";
    } else {
      os << "gf2k:" << base_.degree();
      if (explicit_modulus_) os << ":0x" << std::hex << base_.modulus() << std::dec;
    }
    if (kind_ == Kind::RatFunc) os << ":" << variable_;
    return os.str();
  }

  bool same_as(const FieldDescriptor& o) const {
    return kind_ == o.kind_ && base_ == o.base_ && variable_ == o.variable_;
  }

 private:
  Kind kind_;
  Gf2kArith base_;
  std::string variable_;
  bool explicit_modulus_;
};

using Field = std::shared_ptr<const FieldDescriptor>;

inline Field make_gf2k(unsigned k, std::optional<std::uint32_t> modulus = std::nullopt) {
  const std::uint32_t m = modulus.value_or(default_modulus(k));
  return std::make_shared<const FieldDescriptor>(FieldDescriptor::Kind::Gf2k, Gf2kArith(k, m), "",
                                                 modulus.has_value() && *modulus != default_modulus(k));
}

inline Field make_ratfunc(unsigned k, std::string variable = "t",
                          std::optional<std::uint32_t> modulus = std::nullopt) {
  const std::uint32_t m = modulus.value_or(default_modulus(k));
  return std::make_shared<const FieldDescriptor>(FieldDescriptor::Kind::RatFunc, Gf2kArith(k, m),
                                                 std::move(variable),
                                                 modulus.has_value() && *modulus != default_modulus(k));
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::uint32_t parse_uint(const std::string& s) {
  try {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(s, &pos, 0);
    if (pos != s.size()) throw Error(ErrorKind::ParseError, "trailing characters in '" + s + "'");
    return static_cast<std::uint32_t>(v);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::ParseError, "not an integer: '" + s + "'");
  }
}

}  // namespace detail

/// Parses "gf2", "gf2k:K", "gf2k:K:0xMOD", "ratfunc:<gf2|gf2k:K[:0xMOD]>:VAR".
inline Field parse_field(const std::string& text) {
  auto parts = detail::split(text, ':');
  bool ratfunc = false;
  std::string variable;
  if (!parts.empty() && parts.front() == "ratfunc") {
    if (parts.size() < 3) throw Error(ErrorKind::ParseError, "ratfunc field needs base and variable: " + text);
    ratfunc = true;
    variable = parts.back();
    if (variable.empty()) throw Error(ErrorKind::ParseError, "empty variable name: " + text);
    parts = std::vector<std::string>(parts.begin() + 1, parts.end() - 1);
  }
  unsigned k = 0;
  std::optional<std::uint32_t> modulus;
  if (parts.size() == 1 && parts[0] == "gf2") {
    k = 1;
  } else if ((parts.size() == 2 || parts.size() == 3) && parts[0] == "gf2k") {
    k = detail::parse_uint(parts[1]);
    if (parts.size() == 3) modulus = detail::parse_uint(parts[2]);
  } else {
    throw Error(ErrorKind::ParseError, "unrecognized field descriptor: " + text);
  }
  try {
    return ratfunc ? make_ratfunc(k, variable, modulus) : make_gf2k(k, modulus);
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, std::string(e.what()) + " in '" + text + "'");
  }
}

/// Exact element of a FieldDescriptor. Gf2k payload is a bit residue; RatFunc payload is a
/// reduced fraction with monic denominator (zero is 0/1).
class FieldElement {
 public:
  FieldElement() = default;

  static FieldElement zero(const Field& f) {
    FieldElement e(f);
    if (!f->is_finite()) e.den_ = {1};
    return e;
  }
  static FieldElement one(const Field& f) { return from_int(f, 1); }

  /// Gf2k: packed residue bits. RatFunc: constant polynomial with that base residue.
  static FieldElement from_int(const Field& f, std::uint32_t bits) {
    FieldElement e(f);
    if (f->is_finite()) {
      if (bits > f->base().mask()) throw Error(ErrorKind::InvalidArgument, "residue exceeds field size");
      e.bits_ = bits;
    } else {
      if (bits > f->base().mask()) throw Error(ErrorKind::InvalidArgument, "coefficient exceeds base field");
      e.num_ = poly::constant(bits);
      e.den_ = {1};
    }
    return e;
  }

  static FieldElement from_fraction(const Field& f, Poly num, Poly den = {1}) {
    if (f->is_finite()) throw Error(ErrorKind::UnsupportedField, "fractions need a RatFunc field");
    poly::trim(num);
    poly::trim(den);
    if (den.empty()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
    FieldElement e(f);
    e.num_ = std::move(num);
    e.den_ = std::move(den);
    e.normalize();
    return e;
  }

  /// The transcendental generator of a RatFunc field.
  static FieldElement variable(const Field& f) { return from_fraction(f, Poly{0, 1}); }

  const Field& field() const { return field_; }
  std::uint32_t bits() const { return bits_; }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return field_->is_finite() ? bits_ == 0 : num_.empty(); }
  bool is_one() const { return field_->is_finite() ? bits_ == 1 : poly::is_one(num_) && poly::is_one(den_); }
  bool is_polynomial() const { return field_->is_finite() || poly::is_one(den_); }

  friend FieldElement operator+(const FieldElement& x, const FieldElement& y) {
    const Field& f = common(x, y);
    FieldElement r(f);
    if (f->is_finite()) {
      r.bits_ = x.bits_ ^ y.bits_;
      return r;
    }
    if (x.den_ == y.den_) {
      r.num_ = poly::add(x.num_, y.num_);
      r.den_ = x.den_;
      if (!poly::is_one(r.den_)) r.normalize();
      if (r.num_.empty()) r.den_ = {1};
      return r;
    }
    const Gf2kArith& b = f->base();
    r.num_ = poly::add(poly::mul(b, x.num_, y.den_), poly::mul(b, y.num_, x.den_));
    r.den_ = poly::mul(b, x.den_, y.den_);
    r.normalize();
    return r;
  }

  friend FieldElement operator-(const FieldElement& x, const FieldElement& y) { return x + y; }

  friend FieldElement operator*(const FieldElement& x, const FieldElement& y) {
    const Field& f = common(x, y);
    FieldElement r(f);
    if (f->is_finite()) {
      r.bits_ = f->base().mul(x.bits_, y.bits_);
      return r;
    }
    const Gf2kArith& b = f->base();
    r.num_ = poly::mul(b, x.num_, y.num_);
    r.den_ = poly::mul(b, x.den_, y.den_);
    if (r.num_.empty()) {
      r.den_ = {1};
    } else if (!poly::is_one(r.den_)) {
      r.normalize();
    }
    return r;
  }

  FieldElement inv() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    FieldElement r(field_);
    if (field_->is_finite()) {
      r.bits_ = field_->base().inv(bits_);
      return r;
    }
    const Gf2kArith& b = field_->base();
    const std::uint32_t c = b.inv(num_.back());
    r.num_ = poly::scale(b, den_, c);
    r.den_ = poly::scale(b, num_, c);
    return r;
  }

  friend FieldElement operator/(const FieldElement& x, const FieldElement& y) {
    common(x, y);
    return x * y.inv();
  }

  FieldElement& operator+=(const FieldElement& y) { return *this = *this + y; }
  FieldElement& operator*=(const FieldElement& y) { return *this = *this * y; }

  FieldElement square() const { return *this * *this; }

  FieldElement pow(std::uint64_t e) const {
    FieldElement r = one(field_);
    FieldElement x = *this;
    while (e != 0) {
      if (e & 1u) r *= x;
      x = x.square();
      e >>= 1;
    }
    return r;
  }

  friend bool operator==(const FieldElement& x, const FieldElement& y) {
    if (!x.field_ || !y.field_) return x.field_ == y.field_;
    if (x.field_ != y.field_ && !x.field_->same_as(*y.field_)) return false;
    return x.bits_ == y.bits_ && x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend bool operator!=(const FieldElement& x, const FieldElement& y) { return !(x == y); }

  std::string to_string() const {
    if (!field_) return "<unset>";
    if (field_->is_finite()) {
      std::ostringstream os;
      os << "0x" << std::hex << bits_;
      return os.str();
    }
    if (poly::is_one(den_)) return poly_string(num_);
    return "(" + poly_string(num_) + ")/(" + poly_string(den_) + ")";
  }

  /// Strict weak order for use as a map key; not related to any field structure.
  friend bool operator<(const FieldElement& x, const FieldElement& y) {
    if (x.bits_ != y.bits_) return x.bits_ < y.bits_;
    if (x.num_ != y.num_) return x.num_ < y.num_;
    return x.den_ < y.den_;
  }

 private:
  explicit FieldElement(Field f) : field_(std::move(f)) {}

  static const Field& common(const FieldElement& x, const FieldElement& y) {
    if (!x.field_ || !y.field_) throw Error(ErrorKind::FieldMismatch, "uninitialized field element");
    if (x.field_ != y.field_ && !x.field_->same_as(*y.field_)) {
      throw Error(ErrorKind::FieldMismatch, x.field_->spec() + " vs " + y.field_->spec());
    }
    return x.field_;
  }

  void normalize() {
    const Gf2kArith& b = field_->base();
    if (num_.empty()) {
      den_ = {1};
      return;
    }
    Poly g = poly::gcd(b, num_, den_);
    if (!poly::is_one(g)) {
      num_ = poly::divmod(b, num_, g).first;
      den_ = poly::divmod(b, den_, g).first;
    }
    if (den_.back() != 1) {
      const std::uint32_t c = b.inv(den_.back());
      num_ = poly::scale(b, num_, c);
      den_ = poly::scale(b, den_, c);
    }
  }

  std::string poly_string(const Poly& p) const {
    if (p.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = poly::degree(p); i >= 0; --i) {
      const std::uint32_t c = p[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      if (!first) os << "+";
      first = false;
      const bool show_coeff = c != 1 || i == 0;
      if (show_coeff) {
        if (field_->base().degree() == 1) {
          os << c;
        } else {
          os << "0x" << std::hex << c << std::dec;
        }
      }
      if (i > 0) {
        if (show_coeff) os << "*";
        os << field_->variable();
        if (i > 1) os << "^" << i;
      }
    }
    return os.str();
  }

  Field field_;
  std::uint32_t bits_ = 0;
  Poly num_;
  Poly den_;
};

/// Square root when x is a square; always defined over GF(2^k).
inline std::optional<FieldElement> frobenius_sqrt(const FieldElement& x) {
  const Field& f = x.field();
  if (f->is_finite()) return FieldElement::from_int(f, f->base().sqrt(x.bits()));
  if (!poly::is_square(x.num()) || !poly::is_square(x.den())) return std::nullopt;
  return FieldElement::from_fraction(f, poly::sqrt_of_square(f->base(), x.num()),
                                     poly::sqrt_of_square(f->base(), x.den()));
}

/// x + x^2 + ... + x^(2^(k-1)) over GF(2^k).
inline unsigned absolute_trace(const FieldElement& x) {
  if (!x.field()->is_finite()) throw Error(ErrorKind::UnsupportedField, "absolute trace needs GF(2^k)");
  return x.field()->base().trace(x.bits());
}

/// Outcome of the Artin-Schreier equation x^2 + x = a.
struct ArtinSchreierResult {
  enum class Status { Solved, NoSolution, Unknown };
  Status status = Status::Unknown;
  std::optional<FieldElement> root;

  bool solved() const { return status == Status::Solved; }
};

namespace detail {

/// Solves r^2 + s*r = p for a polynomial r of degree <= max_deg (GF(2)-linear in the bits of r).
inline std::optional<Poly> solve_poly_artin_schreier(const Gf2kArith& b, const Poly& p, const Poly& s,
                                                     int max_deg) {
  const unsigned k = b.degree();
  const std::size_t unknowns = static_cast<std::size_t>(max_deg + 1) * k;
  int out_deg = std::max(2 * max_deg, max_deg + poly::degree(s));
  out_deg = std::max(out_deg, poly::degree(p));
  const std::size_t eqs = static_cast<std::size_t>(out_deg + 1) * k;
  std::vector<std::vector<std::uint8_t>> rows(eqs, std::vector<std::uint8_t>(unknowns, 0));
  for (int i = 0; i <= max_deg; ++i) {
    for (unsigned bit = 0; bit < k; ++bit) {
      Poly r(static_cast<std::size_t>(i) + 1, 0);
      r[static_cast<std::size_t>(i)] = 1u << bit;
      const Poly img = poly::add(poly::mul(b, r, r), poly::mul(b, s, r));
      const std::size_t col = static_cast<std::size_t>(i) * k + bit;
      for (std::size_t j = 0; j < img.size(); ++j) {
        for (unsigned eb = 0; eb < k; ++eb) rows[j * k + eb][col] = (img[j] >> eb) & 1u;
      }
    }
  }
  std::vector<std::uint8_t> rhs(eqs, 0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (unsigned eb = 0; eb < k; ++eb) rhs[j * k + eb] = (p[j] >> eb) & 1u;
  }
  auto sol = solve_gf2_system(std::move(rows), std::move(rhs), unknowns);
  if (!sol) return std::nullopt;
  Poly r(static_cast<std::size_t>(max_deg) + 1, 0);
  for (int i = 0; i <= max_deg; ++i) {
    for (unsigned bit = 0; bit < k; ++bit) {
      if ((*sol)[static_cast<std::size_t>(i) * k + bit]) r[static_cast<std::size_t>(i)] |= 1u << bit;
    }
  }
  poly::trim(r);
  return r;
}

}  // namespace detail

/// Decides whether x^2 + x = a is solvable. Over GF(2^k) this is a GF(2)-linear solve. Over
/// GF(2^k)(t), a root r/s forces a's reduced denominator to be s^2, and deg r is bounded by
/// max(deg num/2, deg s); past `degree_budget` the answer is Unknown.
inline ArtinSchreierResult solve_artin_schreier(const FieldElement& a, int degree_budget = 32) {
  using Status = ArtinSchreierResult::Status;
  const Field& f = a.field();
  const Gf2kArith& b = f->base();
  if (f->is_finite()) {
    auto r = detail::solve_poly_artin_schreier(b, poly::constant(a.bits()), Poly{1}, 0);
    if (!r) return {Status::NoSolution, std::nullopt};
    return {Status::Solved, FieldElement::from_int(f, r->empty() ? 0 : (*r)[0])};
  }
  if (!poly::is_square(a.den())) return {Status::NoSolution, std::nullopt};
  const Poly s = poly::sqrt_of_square(b, a.den());
  const int bound = std::max((poly::degree(a.num()) + 1) / 2, poly::degree(s));
  if (bound > degree_budget) return {Status::Unknown, std::nullopt};
  auto r = detail::solve_poly_artin_schreier(b, a.num(), s, std::max(bound, 0));
  if (!r) return {Status::NoSolution, std::nullopt};
  return {Status::Solved, FieldElement::from_fraction(f, *r, s)};
}

/// Seeded random element. RatFunc elements have numerator degree <= max_degree and, half the
/// time, a random monic denominator of degree 1..max_degree.
inline FieldElement random_element(const Field& f, std::mt19937_64& rng, int max_degree = 2) {
  const Gf2kArith& b = f->base();
  std::uniform_int_distribution<std::uint32_t> coeff(0, b.mask());
  if (f->is_finite()) return FieldElement::from_int(f, coeff(rng));
  std::uniform_int_distribution<int> deg(0, max_degree);
  Poly num(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& c : num) c = coeff(rng);
  Poly den{1};
  if (max_degree > 0 && (rng() & 1u)) {
    std::uniform_int_distribution<int> ddeg(1, max_degree);
    den.assign(static_cast<std::size_t>(ddeg(rng)) + 1, 0);
    for (auto& c : den) c = coeff(rng);
    den.back() = 1;
  }
  return FieldElement::from_fraction(f, std::move(num), std::move(den));
}

inline FieldElement random_nonzero(const Field& f, std::mt19937_64& rng, int max_degree = 2) {
  for (;;) {
    FieldElement x = random_element(f, rng, max_degree);
    if (!x.is_zero()) return x;
  }
}

/// Every element of GF(2^k), in residue order.
inline std::vector<FieldElement> all_elements(const Field& f) {
  if (!f->is_finite()) throw Error(ErrorKind::UnsupportedField, "cannot enumerate an infinite field");
  std::vector<FieldElement> out;
  for (std::uint32_t i = 0; i < f->base().order(); ++i) out.push_back(FieldElement::from_int(f, i));
  return out;
}

}  // namespace charform
