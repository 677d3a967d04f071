#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "charform/field.hpp"

using namespace charform;

namespace {

// Reference multiplication: carry-less product, then long division by the modulus bit by bit.
std::uint32_t oracle_mul(std::uint32_t x, std::uint32_t y, std::uint32_t modulus, unsigned k) {
  std::uint64_t prod = 0;
  for (unsigned i = 0; i < 32; ++i) {
    if ((y >> i) & 1u) prod ^= static_cast<std::uint64_t>(x) << i;
  }
  for (int bit = 63; bit >= static_cast<int>(k); --bit) {
    if ((prod >> bit) & 1u) prod ^= static_cast<std::uint64_t>(modulus) << (bit - static_cast<int>(k));
  }
  return static_cast<std::uint32_t>(prod);
}

FieldElement el(const Field& f, std::uint32_t bits) { return FieldElement::from_int(f, bits); }

FieldElement poly_el(const Field& f, Poly num, Poly den = {1}) {
  return FieldElement::from_fraction(f, std::move(num), std::move(den));
}

}  // namespace

TEST_CASE("field descriptor parsing") {
  CHECK(parse_field("gf2")->base().degree() == 1);
  CHECK(parse_field("gf2k:3")->base().modulus() == 0xB);
  CHECK(parse_field("gf2k:3:0xD")->base().modulus() == 0xD);
  CHECK(parse_field("gf2k:3:0xD")->spec() == "gf2k:3:0xd");
  const Field rf = parse_field("ratfunc:gf2:t");
  CHECK_FALSE(rf->is_finite());
  CHECK(rf->spec() == "ratfunc:gf2:t");
  CHECK_THROWS_AS(parse_field("gf3"), Error);
  CHECK_THROWS_AS(parse_field("gf2k:3:0xF"), Error);  // x^3+x^2+x+1 = (x+1)^3
  CHECK_THROWS_AS(parse_field("ratfunc:ratfunc:gf2:t:s"), Error);
}

TEST_CASE("default moduli are the least irreducible polynomials") {
  // Least irreducible of each degree, found here by brute-force factor search.
  for (unsigned k = 1; k <= 10; ++k) {
    std::uint32_t found = 0;
    for (std::uint32_t m = (1u << k); m < (2u << k) && found == 0; ++m) {
      bool reducible = false;
      for (std::uint32_t a = 2; a < (1u << k) && !reducible; ++a) {
        for (std::uint32_t b = 2; b < (1u << k); ++b) {
          std::uint32_t p = 0;
          for (unsigned i = 0; i < 16; ++i) {
            if ((b >> i) & 1u) p ^= a << i;
          }
          if (p == m) {
            reducible = true;
            break;
          }
        }
      }
      if (!reducible) found = m;
    }
    CHECK(default_modulus(k) == found);
  }
}

TEST_CASE("field arithmetic examples") {
  const Field f2 = make_gf2k(1);
  CHECK((el(f2, 1) + el(f2, 1)).is_zero());

  const Field f4 = make_gf2k(2);
  const FieldElement g = el(f4, 2);
  CHECK(g * g == el(f4, 3));

  const Field rf = make_ratfunc(1);
  const FieldElement t = FieldElement::variable(rf);
  const FieldElement inv = (t + FieldElement::one(rf)).inv();
  CHECK(inv.num() == Poly{1});
  CHECK(inv.den() == Poly{1, 1});

  CHECK_THROWS_AS(FieldElement::zero(f4).inv(), Error);
  CHECK_THROWS_AS(g + t, Error);
  try {
    (void)(g * el(f2, 1));
    FAIL("expected FieldMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FieldMismatch);
  }
}

TEST_CASE("multiplication agrees with the reference oracle") {
  for (unsigned k = 1; k <= 8; ++k) {
    const Field f = make_gf2k(k);
    const std::uint32_t m = f->base().modulus();
    const std::uint32_t n = 1u << k;
    const std::uint32_t step = k <= 5 ? 1 : 7;
    for (std::uint32_t x = 0; x < n; x += step) {
      for (std::uint32_t y = 0; y < n; y += step) {
        REQUIRE((el(f, x) * el(f, y)).bits() == oracle_mul(x, y, m, k));
      }
    }
  }
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(20240611);
  for (const char* spec : {"gf2", "gf2k:3", "gf2k:8", "ratfunc:gf2:t", "ratfunc:gf2k:2:t"}) {
    const Field f = parse_field(spec);
    for (int i = 0; i < 1000; ++i) {
      const FieldElement x = random_element(f, rng);
      const FieldElement y = random_element(f, rng);
      const FieldElement z = random_element(f, rng);
      REQUIRE((x + y) + z == x + (y + z));
      REQUIRE((x * y) * z == x * (y * z));
      REQUIRE(x + y == y + x);
      REQUIRE(x * y == y * x);
      REQUIRE(x * (y + z) == x * y + x * z);
      REQUIRE(x + x == FieldElement::zero(f));
      if (!y.is_zero()) REQUIRE((x / y) * y == x);
    }
  }
}

TEST_CASE("rational function canonical form") {
  const Field rf = make_ratfunc(1);
  // (t^2+t)/(t^2+1) = t/(t+1)
  const FieldElement x = poly_el(rf, {0, 1, 1}, {1, 0, 1});
  CHECK(x.num() == Poly{0, 1});
  CHECK(x.den() == Poly{1, 1});
  CHECK(x.to_string() == "(t)/(t+1)");
  const Field rf4 = make_ratfunc(2);
  // Denominator 2t+1 (coefficient g) becomes monic: 1/(g t + 1) = (g+1)/(t + (g+1)).
  const FieldElement y = poly_el(rf4, {1}, {1, 2});
  CHECK(y.den().back() == 1u);
  CHECK(y * poly_el(rf4, {1, 2}) == FieldElement::one(rf4));
}

TEST_CASE("frobenius square roots") {
  const Field f4 = make_gf2k(2);
  CHECK(*frobenius_sqrt(el(f4, 2)) == el(f4, 3));
  const Field rf = make_ratfunc(1);
  CHECK(*frobenius_sqrt(poly_el(rf, {1, 0, 1})) == poly_el(rf, {1, 1}));
  CHECK_FALSE(frobenius_sqrt(FieldElement::variable(rf)).has_value());

  std::mt19937_64 rng(99);
  for (unsigned k : {1u, 3u, 5u, 8u, 13u}) {
    const Field f = make_gf2k(k);
    for (int i = 0; i < 1000; ++i) {
      const FieldElement x = random_element(f, rng);
      REQUIRE(*frobenius_sqrt(x * x) == x);
    }
  }
  for (int i = 0; i < 200; ++i) {
    const FieldElement x = random_element(rf, rng, 3);
    REQUIRE(*frobenius_sqrt(x * x) == x);
  }
}

TEST_CASE("Artin-Schreier equation") {
  const Field f2 = make_gf2k(1);
  auto r0 = solve_artin_schreier(el(f2, 0));
  REQUIRE(r0.solved());
  CHECK(r0.root->is_zero());
  CHECK(solve_artin_schreier(el(f2, 1)).status == ArtinSchreierResult::Status::NoSolution);
  const Field f4 = make_gf2k(2);
  CHECK(solve_artin_schreier(el(f4, 2)).status == ArtinSchreierResult::Status::NoSolution);

  for (unsigned k = 1; k <= 4; ++k) {
    const Field f = make_gf2k(k);
    std::set<std::uint32_t> image;
    for (const auto& x : all_elements(f)) image.insert((x * x + x).bits());
    CHECK(image.size() == (1u << (k - 1)));
    for (const auto& a : all_elements(f)) {
      const auto r = solve_artin_schreier(a);
      REQUIRE(r.solved() == (image.count(a.bits()) == 1));
      if (r.solved()) REQUIRE(*r.root * *r.root + *r.root == a);
    }
  }

  const Field rf = make_ratfunc(1);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const FieldElement x = random_element(rf, rng, 3);
    const FieldElement a = x * x + x;
    const auto r = solve_artin_schreier(a);
    REQUIRE(r.solved());
    REQUIRE(*r.root * *r.root + *r.root == a);
  }
  // t is not x^2 + x: a root r/s would need s = 1, and deg(r^2 + r) is even.
  CHECK(solve_artin_schreier(FieldElement::variable(rf)).status == ArtinSchreierResult::Status::NoSolution);
  // 1/t has a non-square denominator.
  CHECK(solve_artin_schreier(FieldElement::variable(rf).inv()).status == ArtinSchreierResult::Status::NoSolution);
}

TEST_CASE("absolute trace") {
  CHECK(absolute_trace(el(make_gf2k(1), 1)) == 1);
  const Field f4 = make_gf2k(2);
  CHECK(absolute_trace(el(f4, 2)) == 1);
  CHECK(absolute_trace(el(f4, 1)) == 0);
  for (unsigned k = 1; k <= 4; ++k) {
    const Field f = make_gf2k(k);
    for (const auto& x : all_elements(f)) REQUIRE(absolute_trace(x * x + x) == 0);
  }
  CHECK_THROWS_AS(absolute_trace(FieldElement::one(make_ratfunc(1))), Error);
}
