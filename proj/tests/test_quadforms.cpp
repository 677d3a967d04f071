#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <unordered_set>

#include "charform/isotropy.hpp"

using namespace charform;

namespace {

FieldElement el(const Field& f, std::uint32_t bits) { return FieldElement::from_int(f, bits); }

// Evaluates a block/diagonal form straight from its definition.
FieldElement oracle_eval(const QuadraticForm& q, const std::vector<FieldElement>& v) {
  FieldElement s = FieldElement::zero(q.field);
  std::size_t i = 0;
  for (const auto& blk : q.blocks) {
    s += blk.a * v[i] * v[i] + v[i] * v[i + 1] + blk.b * v[i + 1] * v[i + 1];
    i += 2;
  }
  for (const auto& c : q.diag) {
    s += c * v[i] * v[i];
    ++i;
  }
  return s;
}

// Number of nonzero vectors with q(v) = 0, by enumeration.
std::uint64_t count_zeros(const QuadraticForm& q) {
  const auto elems = all_elements(q.field);
  const std::size_t n = q.dimension();
  std::vector<FieldElement> v(n, elems[0]);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= elems.size();
  std::uint64_t zeros = 0;
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = elems[c % elems.size()];
      c /= elems.size();
    }
    if (oracle_eval(q, v).is_zero()) ++zeros;
  }
  return zeros;
}

bool brute_isotropic(const QuadraticForm& q) { return count_zeros(q) > 0; }

// A nonsingular form of dimension 2m over GF(q) has q^(2m-1) + e(q^m - q^(m-1)) - 1 nonzero
// zeros, with e = +1 exactly when it is hyperbolic.
bool brute_hyperbolic(const QuadraticForm& q) {
  const std::uint64_t order = q.field->base().order();
  const std::size_t m = q.blocks.size();
  std::uint64_t qm = 1;
  for (std::size_t i = 0; i < m; ++i) qm *= order;
  const std::uint64_t hyperbolic_count = qm * qm / order + qm - qm / order - 1;
  return count_zeros(q) == hyperbolic_count;
}

QuadraticForm random_form(const Field& f, std::mt19937_64& rng, std::size_t blocks, std::size_t diag) {
  QuadraticForm q{f, {}, {}};
  for (std::size_t i = 0; i < blocks; ++i) q.blocks.push_back({random_element(f, rng), random_element(f, rng)});
  for (std::size_t i = 0; i < diag; ++i) q.diag.push_back(random_element(f, rng));
  return q;
}

RawQuadraticForm random_raw(const Field& f, std::mt19937_64& rng, std::size_t n) {
  RawQuadraticForm q = RawQuadraticForm::zero(f, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) q.coeffs(i, j) = random_element(f, rng);
  }
  return q;
}

// Raw evaluation sum_{i<=j} U_ij v_i v_j, written out independently.
FieldElement oracle_raw_eval(const RawQuadraticForm& q, const Vec& v) {
  FieldElement s = FieldElement::zero(q.field);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i; j < v.size(); ++j) s += q.coeffs(i, j) * v[i] * v[j];
  }
  return s;
}

}  // namespace

TEST_CASE("polar matrix") {
  const Field f = make_gf2k(1);
  const FieldMatrix b = polar_matrix(block_form(el(f, 1), el(f, 1)).to_raw());
  CHECK(b(0, 0).is_zero());
  CHECK(b(0, 1).is_one());
  CHECK(b(1, 0).is_one());
  CHECK(b(1, 1).is_zero());
  CHECK(polar_matrix(diagonal_form(f, {el(f, 1)}).to_raw())(0, 0).is_zero());
  std::mt19937_64 rng(3);
  const Field f8 = make_gf2k(3);
  for (int i = 0; i < 50; ++i) {
    const FieldMatrix p = polar_matrix(random_raw(f8, rng, 6));
    for (std::size_t k = 0; k < 6; ++k) REQUIRE(p(k, k).is_zero());
  }
}

TEST_CASE("normalize examples") {
  const Field f = make_gf2k(1);
  RawQuadraticForm xy = RawQuadraticForm::zero(f, 2);
  xy.coeffs(0, 1) = el(f, 1);
  CHECK(normalize(xy).form == block_form(el(f, 0), el(f, 0)));

  RawQuadraticForm cx = RawQuadraticForm::zero(f, 1);
  cx.coeffs(0, 0) = el(f, 1);
  CHECK(normalize(cx).form == diagonal_form(f, {el(f, 1)}));

  RawQuadraticForm u = RawQuadraticForm::zero(f, 2);
  u.coeffs(0, 0) = el(f, 1);
  u.coeffs(0, 1) = el(f, 1);
  u.coeffs(1, 1) = el(f, 1);
  const auto n = normalize(u);
  CHECK(n.form == block_form(el(f, 1), el(f, 1)));
  for (const auto& x : all_elements(f)) {
    for (const auto& y : all_elements(f)) {
      const Vec v{x, y};
      CHECK(oracle_raw_eval(u, v) == n.form.evaluate(mat_vec(n.to_new, v)));
    }
  }
}

TEST_CASE("normalize preserves evaluation") {
  std::mt19937_64 rng(11);
  for (const char* spec : {"gf2", "gf2k:2", "gf2k:3", "ratfunc:gf2:t"}) {
    const Field f = parse_field(spec);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 1 + static_cast<std::size_t>(trial % 7);
      RawQuadraticForm q = random_raw(f, rng, n);
      if (trial % 3 == 0 && n > 1) {
        // Force a polar radical: make the last variable a copy of the first in the polar form.
        for (std::size_t j = 0; j < n; ++j) {
          q.coeffs(std::min(j, n - 1), std::max(j, n - 1)) = FieldElement::zero(f);
        }
      }
      const auto norm = normalize(q);
      REQUIRE(norm.form.dimension() == n);
      for (int s = 0; s < 50; ++s) {
        Vec v;
        for (std::size_t i = 0; i < n; ++i) v.push_back(random_element(f, rng));
        REQUIRE(oracle_raw_eval(q, v) == norm.form.evaluate(mat_vec(norm.to_new, v)));
        REQUIRE(oracle_eval(norm.form, mat_vec(norm.to_new, v)) == q.evaluate(v));
      }
      // Radical dimension agrees with the polar rank.
      REQUIRE(norm.form.diag.size() == n - rank(polar_matrix(q)));
    }
  }
}

TEST_CASE("scale, direct sum and tensor") {
  const Field f = make_gf2k(2);
  const FieldElement a = el(f, 2);
  const FieldElement c = el(f, 3);
  const QuadraticForm q = block_form(el(f, 1), c);
  CHECK(scale(FieldElement::one(f), q) == q);
  CHECK(scale(a, q) == block_form(a, c / a));
  CHECK(bilinear_tensor({FieldElement::one(f)}, q) == q);
  CHECK(scale(a, diagonal_form(f, {c})) == diagonal_form(f, {a * c}));
  CHECK_THROWS_AS(scale(FieldElement::zero(f), q), Error);
  CHECK_THROWS_AS(direct_sum(q, block_form(el(make_gf2k(1), 1), el(make_gf2k(1), 1))), Error);

  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const FieldElement s = random_nonzero(f, rng);
    const QuadraticForm r = random_form(f, rng, 2, 1);
    const QuadraticForm sr = scale(s, r);
    std::vector<FieldElement> v;
    for (std::size_t k = 0; k < r.dimension(); ++k) v.push_back(random_element(f, rng));
    // scale(s, r)(x, y) = s * r(x, y / s) blockwise.
    std::vector<FieldElement> w = v;
    for (std::size_t k = 0; k < r.blocks.size(); ++k) w[2 * k + 1] = v[2 * k + 1] / s;
    REQUIRE(oracle_eval(sr, v) == s * oracle_eval(r, w));
  }
}

TEST_CASE("Pfister constructors") {
  const Field f = make_gf2k(3);
  const FieldElement c = el(f, 5);
  CHECK(quad_pfister(f, {}, c) == block_form(FieldElement::one(f), c));
  CHECK(quad_pfister(f, {el(f, 2), el(f, 3)}, c).dimension() == 8);
  CHECK(quad_pfister(f, {el(f, 2), el(f, 3)}, c).is_nonsingular());
  CHECK_THROWS_AS(quad_pfister(f, {FieldElement::zero(f)}, c), Error);

  const Field rf = make_ratfunc(1);
  const FieldElement t = FieldElement::variable(rf);
  const FieldElement one = FieldElement::one(rf);
  CHECK(quasi_pfister(rf, {t}) == diagonal_form(rf, {one, t}));
  CHECK(quasi_pfister(rf, {}) == diagonal_form(rf, {one}));
  const FieldElement u = t + one;
  CHECK(quasi_pfister(rf, {t, u}) == diagonal_form(rf, {one, t, u, t * u}));
  CHECK_THROWS_AS(quasi_pfister(rf, {FieldElement::zero(rf)}), Error);

  // c = x^2 + x makes the Pfister form hyperbolic.
  const Field f4 = make_gf2k(2);
  for (const auto& x : all_elements(f4)) {
    const QuadraticForm p = quad_pfister(f4, {el(f4, 2), el(f4, 3)}, x * x + x);
    CHECK(arf_invariant(p) == 0);
    CHECK(is_hyperbolic(p) == Decision::True);
  }
}

TEST_CASE("Arf invariant") {
  const Field f = make_gf2k(1);
  const QuadraticForm h = block_form(el(f, 0), el(f, 0));
  const QuadraticForm an = block_form(el(f, 1), el(f, 1));
  CHECK(arf_invariant(h) == 0);
  CHECK(arf_invariant(an) == 1);
  CHECK(arf_invariant(direct_sum(an, an)) == 0);
  CHECK_THROWS_AS(arf_invariant(diagonal_form(f, {el(f, 1)})), Error);
  CHECK_THROWS_AS(arf_invariant(block_form(FieldElement::one(make_ratfunc(1)), FieldElement::one(make_ratfunc(1)))),
                  Error);

  for (unsigned k : {1u, 2u}) {
    const Field fk = make_gf2k(k);
    std::mt19937_64 rng(k);
    for (int i = 0; i < 20; ++i) {
      const QuadraticForm q1 = random_form(fk, rng, 1 + i % 2, 0);
      const QuadraticForm q2 = random_form(fk, rng, 1, 0);
      REQUIRE(arf_invariant(direct_sum(q1, q2)) == (arf_invariant(q1) ^ arf_invariant(q2)));
      for (const auto& c : all_elements(fk)) {
        if (!c.is_zero()) REQUIRE(arf_invariant(scale(c, q1)) == arf_invariant(q1));
      }
      REQUIRE((arf_invariant(q1) == 0) == brute_hyperbolic(q1));
    }
  }
}

TEST_CASE("Witt decomposition over finite fields") {
  const Field f = make_gf2k(1);
  const QuadraticForm an = block_form(el(f, 1), el(f, 1));
  const auto w = witt_decompose_gf2k(an);
  CHECK(w.anisotropic_kernel.dimension() == 2);
  CHECK(w.witt_index == 0);
  CHECK_FALSE(brute_isotropic(an));

  const auto wh = witt_decompose_gf2k(block_form(el(f, 0), el(f, 0)));
  CHECK(wh.witt_index == 1);
  CHECK(wh.arf == 0);

  for (unsigned k : {1u, 2u, 3u}) {
    const Field fk = make_gf2k(k);
    std::mt19937_64 rng(100 + k);
    for (int i = 0; i < 5; ++i) {
      const QuadraticForm p = quad_pfister(fk, {random_nonzero(fk, rng), random_nonzero(fk, rng)}, random_element(fk, rng));
      const auto wp = witt_decompose_gf2k(p);
      REQUIRE(wp.witt_index == 4);
      REQUIRE(wp.anisotropic_kernel.dimension() == 0);
      if (k == 1) REQUIRE(brute_hyperbolic(p));
    }
  }

  CHECK(witt_equivalent_gf2k(an, direct_sum(an, block_form(el(f, 0), el(f, 0)))));
  CHECK_FALSE(witt_equivalent_gf2k(an, block_form(el(f, 0), el(f, 0))));
  CHECK(witt_equivalent_gf2k(direct_sum(an, an), direct_sum(block_form(el(f, 0), el(f, 0)), block_form(el(f, 0), el(f, 0)))));
  CHECK_THROWS_AS(witt_decompose_gf2k(diagonal_form(make_ratfunc(1), {})), Error);

  // dimension = 2 * index + kernel + radical zeros, on random singular and nonsingular forms.
  std::mt19937_64 rng(8);
  const Field f4 = make_gf2k(2);
  for (int i = 0; i < 100; ++i) {
    const QuadraticForm q = random_form(f4, rng, i % 3, i % 4);
    const auto wq = witt_decompose_gf2k(q);
    REQUIRE(wq.dimension == 2 * wq.witt_index + wq.anisotropic_kernel.dimension() + wq.radical_zeros);
  }
}

TEST_CASE("tensor with a product of Pfister slots") {
  std::mt19937_64 rng(21);
  for (unsigned k : {1u, 2u, 3u}) {
    const Field f = make_gf2k(k);
    for (int i = 0; i < 20; ++i) {
      const FieldElement a = random_nonzero(f, rng);
      const FieldElement b = random_nonzero(f, rng);
      const QuadraticForm q = random_form(f, rng, 2, 0);
      const FieldElement one = FieldElement::one(f);
      const QuadraticForm lhs = bilinear_tensor({one, a}, bilinear_tensor({one, b}, q));
      const QuadraticForm rhs = bilinear_tensor({one, a, b, a * b}, q);
      REQUIRE(witt_equivalent_gf2k(lhs, rhs));
    }
  }
}

TEST_CASE("decisions agree with exhaustive isotropy search") {
  for (unsigned k : {1u, 2u}) {
    const Field f = make_gf2k(k);
    std::mt19937_64 rng(300 + k);
    const std::size_t max_dim = k == 1 ? 8 : 6;
    for (int i = 0; i < 60; ++i) {
      const std::size_t blocks = static_cast<std::size_t>(rng() % (max_dim / 2 + 1));
      const std::size_t diag = static_cast<std::size_t>(rng() % (max_dim - 2 * blocks + 1));
      const QuadraticForm q = random_form(f, rng, blocks, diag);
      if (q.dimension() == 0) continue;
      REQUIRE((is_isotropic(q) == Decision::True) == brute_isotropic(q));
      if (q.is_nonsingular()) REQUIRE((is_hyperbolic(q) == Decision::True) == brute_hyperbolic(q));
    }
    // Pfister forms up to dimension 8 (k <= 3 in the property; k = 3 at dimension 4 to bound the count).
    for (int i = 0; i < 10; ++i) {
      const std::vector<FieldElement> slots =
          k == 1 ? std::vector<FieldElement>{random_nonzero(f, rng), random_nonzero(f, rng)}
                 : std::vector<FieldElement>{random_nonzero(f, rng)};
      const QuadraticForm p = quad_pfister(f, slots, random_element(f, rng));
      REQUIRE((is_hyperbolic(p) == Decision::True) == brute_hyperbolic(p));
      REQUIRE((is_hyperbolic(p) == Decision::True) == brute_isotropic(p));
    }
  }
  const Field f8 = make_gf2k(3);
  for (const auto& c : all_elements(f8)) {
    const QuadraticForm p = block_form(FieldElement::one(f8), c);
    REQUIRE((is_hyperbolic(p) == Decision::True) == brute_isotropic(p));
  }
}

TEST_CASE("hyperbolicity examples") {
  const Field f = make_gf2k(1);
  CHECK(is_hyperbolic(block_form(el(f, 1), el(f, 1))) == Decision::False);
  CHECK(is_hyperbolic(direct_sum(block_form(el(f, 0), el(f, 0)), block_form(el(f, 0), el(f, 0)))) == Decision::True);
  CHECK_THROWS_AS(is_hyperbolic(diagonal_form(f, {el(f, 1)})), Error);
}

namespace {

using Bits = std::uint64_t;  // GF(2)[t] polynomial, bit i = coefficient of t^i

Bits clmul(Bits a, Bits b) {
  Bits r = 0;
  for (int i = 0; i < 32; ++i) {
    if ((b >> i) & 1u) r ^= a << i;
  }
  return r;
}

// x^2 + a xy + ... as given by coefficient polynomials (ca, cxy, cb): ca x^2 + cxy xy + cb y^2.
Bits binary_value(Bits x, Bits y, Bits ca, Bits cxy, Bits cb) {
  return clmul(ca, clmul(x, x)) ^ clmul(cxy, clmul(x, y)) ^ clmul(cb, clmul(y, y));
}

// Looks for a nonzero polynomial zero of f1(x0,x1) + f2(x2,x3) with entry degree <= d by meeting
// in the middle on the values of the two binary pieces.
bool mitm_has_zero(int d, Bits a1, Bits m1, Bits b1, Bits a2, Bits m2, Bits b2) {
  const Bits n = Bits{1} << (d + 1);
  std::unordered_set<Bits> left;
  bool left_zero_nontrivial = false;
  for (Bits x = 0; x < n; ++x) {
    for (Bits y = 0; y < n; ++y) {
      const Bits v = binary_value(x, y, a1, m1, b1);
      if (v == 0 && (x | y) != 0) left_zero_nontrivial = true;
      if (v != 0) left.insert(v);
    }
  }
  if (left_zero_nontrivial) return true;
  for (Bits x = 0; x < n; ++x) {
    for (Bits y = 0; y < n; ++y) {
      const Bits v = binary_value(x, y, a2, m2, b2);
      if ((x | y) != 0 && v == 0) return true;
      if (v != 0 && left.count(v)) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("norm forms over F2(t)") {
  const Field rf = make_ratfunc(1);
  const FieldElement t = FieldElement::variable(rf);
  const FieldElement one = FieldElement::one(rf);

  // [1, t): x0^2 + x0x1 + x1^2 + t(x2^2 + x2x3 + x3^2), cleared of denominators.
  CHECK_FALSE(mitm_has_zero(8, 1, 1, 1, 2, 2, 2));
  const QuadraticForm n1t = quad_pfister(rf, {t}, one);
  CHECK(certify_anisotropic(n1t));
  CHECK(is_hyperbolic(n1t) == Decision::False);
  CHECK(is_isotropic(n1t) == Decision::False);

  // [t, t): the norm form represents 0 since t = nrd(u). In nrd coordinates x0 = t, x3 = 1;
  // in the block coordinates of [1,t] + [t,1] this is (1, 0, 0, 1).
  CHECK(mitm_has_zero(2, 1, 1, 2, 2, 2, 4));
  const QuadraticForm ntt = quad_pfister(rf, {t}, t);
  CHECK(ntt.evaluate({one, FieldElement::zero(rf), FieldElement::zero(rf), one}).is_zero());
  CHECK_FALSE(certify_anisotropic(ntt));
  IsotropyOptions pf;
  pf.known_pfister = true;
  CHECK(is_hyperbolic(ntt, pf) == Decision::True);
  CHECK(is_hyperbolic(ntt) == Decision::Unknown);

  // A binary form is hyperbolic as soon as a zero is found.
  CHECK(is_hyperbolic(block_form(t, FieldElement::zero(rf))) == Decision::True);
  // x^2 + xy + t y^2 is anisotropic (t is not of the form r^2 + r).
  CHECK(is_hyperbolic(block_form(one, t)) == Decision::False);
}

TEST_CASE("certificate survives t -> 1/t") {
  const Field rf = make_ratfunc(1);
  const FieldElement t = FieldElement::variable(rf);
  const FieldElement one = FieldElement::one(rf);
  // [1, 1/t) is anisotropic exactly when [1, t) is (scale by t^2).
  const QuadraticForm q = quad_pfister(rf, {t.inv()}, one);
  CHECK(certify_anisotropic(q));
  CHECK(detail::invert_variable(detail::invert_variable(q)) == q);
}

TEST_CASE("totally singular isometry") {
  const Field f2 = make_gf2k(1);
  CHECK(totally_singular_isometry(diagonal_form(f2, {el(f2, 1), el(f2, 1)}), diagonal_form(f2, {el(f2, 1), el(f2, 1)})) ==
        Decision::True);
  const Field f4 = make_gf2k(2);
  CHECK(totally_singular_isometry(diagonal_form(f4, {el(f4, 2)}), diagonal_form(f4, {el(f4, 1)})) == Decision::True);
  const Field rf = make_ratfunc(1);
  const FieldElement t = FieldElement::variable(rf);
  const FieldElement one = FieldElement::one(rf);
  CHECK(totally_singular_isometry(diagonal_form(rf, {one, t}), diagonal_form(rf, {one, t * t})) == Decision::False);
  CHECK(totally_singular_isometry(diagonal_form(rf, {one, t}), diagonal_form(rf, {t * t, t * (t + one) * (t + one)})) ==
        Decision::True);
  CHECK(totally_singular_isometry(diagonal_form(rf, {one, t}), diagonal_form(rf, {one})) == Decision::False);
  CHECK(is_quasi_hyperbolic(diagonal_form(rf, {one, (t + one) * (t + one)})));
  CHECK_FALSE(is_quasi_hyperbolic(diagonal_form(rf, {one, t})));
}
