#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "charform/symmetric.hpp"

using namespace charform;

namespace {

FieldElement el(const Field& f, std::uint32_t bits) { return FieldElement::from_int(f, bits); }

std::vector<Algebra> symplectic_descriptors(const Field& f) {
  std::vector<Algebra> out{AlgebraDescriptor::split_symp(f)};
  if (f->base().order() > 2) {
    const FieldElement g = el(f, 2);
    out.push_back(AlgebraDescriptor::index2_symp(make_quaternions(g, g + FieldElement::one(f)), g, g * g, FieldElement::one(f)));
  } else {
    const FieldElement one = FieldElement::one(f);
    out.push_back(AlgebraDescriptor::index2_symp(make_quaternions(one, one), one, one, one));
  }
  return out;
}

// det(X - M) for M over GF(2^k), by fraction-field Gaussian elimination in GF(2^k)(X).
std::vector<std::uint32_t> oracle_charpoly(const FieldMatrix& m) {
  const unsigned k = m(0, 0).field()->base().degree();
  const Field rf = make_ratfunc(k, "X", m(0, 0).field()->base().modulus());
  const std::size_t n = m.rows();
  FieldMatrix a(n, n, FieldElement::zero(rf));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = FieldElement::from_int(rf, m(i, j).bits());
    a(i, i) += FieldElement::variable(rf);
  }
  FieldElement det = FieldElement::one(rf);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (a(p, c).is_zero()) ++p;
    a.swap_rows(p, c);
    det = det * a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a(r, c).is_zero()) continue;
      const FieldElement factor = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) += factor * a(c, j);
    }
  }
  REQUIRE(det.is_polynomial());
  return det.num();
}

// [0,1) = M_2(F) via u -> [[1,0],[0,0]], v -> [[0,1],[1,0]], so x -> [[x0+x1, x2+x3], [x2, x0]].
FieldMatrix split_image(const AlgebraDescriptor& d, const AlgElem& x) {
  FieldMatrix m(8, 8, FieldElement::zero(d.field()));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const Entry& e = x(i, j);
      m(2 * i, 2 * j) = e[0] + e[1];
      m(2 * i, 2 * j + 1) = e[2] + e[3];
      m(2 * i + 1, 2 * j) = e[2];
      m(2 * i + 1, 2 * j + 1) = e[0];
    }
  }
  return m;
}

// Sum of principal 2x2 minors of a 4x4 matrix over the center.
QuadExtElement oracle_e2(const AlgebraDescriptor& d, const AlgElem& x) {
  const QuadExtRing z = d.center();
  QuadExtElement s = z.zero();
  auto at = [&](std::size_t i, std::size_t j) { return QuadExtElement{x(i, j)[0], x(i, j)[1]}; };
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      s = z.add(s, z.add(z.mul(at(i, i), at(j, j)), z.mul(at(i, j), at(j, i))));
    }
  }
  return s;
}

AlgElem random_elem(const AlgebraDescriptor& d, std::mt19937_64& rng) {
  return d.from_vec(random_coords(d.field(), d.vector_dim(), rng));
}

}  // namespace

TEST_CASE("involution basics") {
  std::mt19937_64 rng(51);
  for (const char* spec : {"gf2", "gf2k:3", "ratfunc:gf2:t"}) {
    const Field f = parse_field(spec);
    const FieldElement t = f->is_finite() ? el(f, 1) : FieldElement::variable(f);
    std::vector<Algebra> algs = symplectic_descriptors(f->is_finite() ? f : make_gf2k(1));
    if (!f->is_finite()) {
      algs = {AlgebraDescriptor::split_symp(f),
              AlgebraDescriptor::index2_symp(make_quaternions(t, t), FieldElement::one(f), t, t + FieldElement::one(f))};
    }
    algs.push_back(AlgebraDescriptor::unitary_exchange(f));
    algs.push_back(AlgebraDescriptor::orthogonal(f, {FieldElement::one(f), t, FieldElement::one(f), t}));
    for (const auto& a : algs) {
      const AlgebraDescriptor& d = *a;
      CHECK(d.involution(d.one()) == d.one());
      for (int i = 0; i < 100; ++i) {
        const AlgElem x = random_elem(d, rng);
        const AlgElem y = random_elem(d, rng);
        REQUIRE(d.involution(d.involution(x)) == x);
        REQUIRE(d.involution(d.mul(x, y)) == d.mul(d.involution(y), d.involution(x)));
      }
    }
  }
  // h = <1,1,1,1> gives the conjugate transpose.
  const Field f = make_gf2k(2);
  const Algebra d_alg = AlgebraDescriptor::index2_symp(make_quaternions(el(f, 2), el(f, 3)), el(f, 1), el(f, 1), el(f, 1));
  const AlgebraDescriptor& d = *d_alg;
  for (int i = 0; i < 20; ++i) {
    const AlgElem x = random_elem(d, rng);
    const AlgElem s = d.involution(x);
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 4; ++c) {
        const Entry& e = x(c, r);
        REQUIRE(s(r, c) == Entry{e[0] + e[1], e[1], e[2], e[3]});
      }
    }
  }
  CHECK_THROWS_AS(d.mul(d.one(), AlgElem(3, 3, d.entry_zero())), Error);
  CHECK_THROWS_AS(AlgebraDescriptor::orthogonal(f, {el(f, 1), el(f, 0), el(f, 1), el(f, 1)}), Error);
  CHECK_THROWS_AS(AlgebraDescriptor::unitary_etale(make_gf2k(1), el(make_gf2k(1), 0),
                                                   std::vector<FieldElement>(4, el(make_gf2k(1), 1))),
                  Error);
}

TEST_CASE("symmetric space dimensions") {
  for (const char* spec : {"gf2", "gf2k:2", "gf2k:3"}) {
    const Field f = parse_field(spec);
    for (const auto& a : symplectic_descriptors(f)) CHECK(symmetric_space(*a).dimension() == 28);
    CHECK(symmetric_space(*AlgebraDescriptor::unitary_exchange(f)).dimension() == 16);
    CHECK(symmetric_space(*AlgebraDescriptor::orthogonal(f, std::vector<FieldElement>(4, FieldElement::one(f)))).dimension() == 10);
    CHECK(symmetrized_space(*AlgebraDescriptor::orthogonal(f, std::vector<FieldElement>(4, FieldElement::one(f)))).dimension() == 6);
    // x + sigma(x) is fixed, so Symd lies inside Sym; the fixed space is larger in characteristic 2.
    const Algebra sp_alg = AlgebraDescriptor::split_symp(f);
  const AlgebraDescriptor& sp = *sp_alg;
    CHECK(fixed_space(sp).dimension() == 36);
  }
  const Field f = make_gf2k(1);
  const FieldElement one = FieldElement::one(f);
  // X^2 + X + 1 has no root in GF(2): an etale unitary algebra.
  CHECK(symmetric_space(*AlgebraDescriptor::unitary_etale(f, one, {one, one, one, one})).dimension() == 16);
}

TEST_CASE("reduced characteristic polynomial") {
  const Field f = make_gf2k(1);
  const Algebra d_alg = AlgebraDescriptor::split_symp(f);
  const AlgebraDescriptor& d = *d_alg;
  // (X+1)^8 = X^8 + 1.
  FieldPoly expect(9, FieldElement::zero(f));
  expect[0] = expect[8] = FieldElement::one(f);
  CHECK(pcrd(d, d.one()) == expect);
  AlgElem e = d.zero();
  e(0, 0) = d.entry_scalar(FieldElement::one(f));
  // X^6 (X+1)^2 = X^8 + X^6.
  FieldPoly proj(9, FieldElement::zero(f));
  proj[6] = proj[8] = FieldElement::one(f);
  CHECK(pcrd(d, e) == proj);

  std::mt19937_64 rng(52);
  for (unsigned k : {1u, 2u, 3u}) {
    const Field fk = make_gf2k(k);
    const Algebra dk_alg = AlgebraDescriptor::split_symp(fk);
  const AlgebraDescriptor& dk = *dk_alg;
    for (int i = 0; i < 20; ++i) {
      const AlgElem x = random_elem(dk, rng);
      const FieldPoly p = pcrd(dk, x);
      const auto oracle = oracle_charpoly(split_image(dk, x));
      REQUIRE(oracle.size() == p.size());
      for (std::size_t c = 0; c < p.size(); ++c) REQUIRE(p[c].bits() == oracle[c]);
      const AlgElem z = poly_at(dk, p, x);
      REQUIRE(z == dk.zero());
    }
  }
  // Cayley-Hamilton in every kind.
  for (const char* spec : {"gf2k:2", "ratfunc:gf2:t"}) {
    const Field fk = parse_field(spec);
    const FieldElement one = FieldElement::one(fk);
    const FieldElement t = fk->is_finite() ? el(fk, 2) : FieldElement::variable(fk);
    std::vector<Algebra> algs{AlgebraDescriptor::index2_symp(make_quaternions(t, t), one, t, t + one),
                              AlgebraDescriptor::unitary_exchange(fk),
                              AlgebraDescriptor::orthogonal(fk, {one, t, one, t + one})};
    if (fk->is_finite()) algs.push_back(AlgebraDescriptor::unitary_etale(fk, t, {one, t, one, one}));
    for (const auto& a : algs) {
      for (int i = 0; i < 10; ++i) {
        const AlgElem x = a->type() == InvolutionType::Unitary && a->kind() == AlgebraKind::UnitaryEtale
                              ? symmetric_space(*a).element(*a, random_coords(fk, 16, rng))
                              : random_elem(*a, rng);
        const FieldPoly p = pcrd(*a, x);
        REQUIRE(p.size() == a->degree() + 1);
        if (a->kind() != AlgebraKind::UnitaryExchange) REQUIRE(poly_at(*a, p, x) == a->zero());
      }
    }
  }
}

TEST_CASE("reduced Pfaffian") {
  std::mt19937_64 rng(53);
  for (const char* spec : {"gf2", "gf2k:2", "gf2k:3", "ratfunc:gf2:t"}) {
    const Field f = parse_field(spec);
    const FieldElement one = FieldElement::one(f);
    const FieldElement t = f->is_finite() ? el(f, f->base().order() > 2 ? 2 : 1) : FieldElement::variable(f);
    std::vector<Algebra> algs{AlgebraDescriptor::split_symp(f),
                              AlgebraDescriptor::index2_symp(make_quaternions(t, t), one, t, t * t)};
    for (const auto& a : algs) {
      const AlgebraDescriptor& d = *a;
      const PfaffianData p1 = prp(d, d.one());
      // (X+1)^4 = X^4 + 1.
      CHECK(p1.srp.is_zero());
      CHECK(p1.trp.is_zero());
      CHECK(p1.nrp.is_one());
      const InvolutionSpace s = symmetric_space(d);
      REQUIRE(s.dimension() == 28);
      const int trials = f->is_finite() ? 100 : 20;
      for (int i = 0; i < trials; ++i) {
        const HalvedElement x = s.halved(d, random_coords(f, 28, rng));
        const HalvedElement y = s.halved(d, random_coords(f, 28, rng));
        const PfaffianData px = prp(d, x.value);
        const PfaffianData py = prp(d, y.value);
        const PfaffianData pxy = prp(d, d.add(x.value, y.value));
        // Prp^2 = Pcrd, and Prp annihilates x.
        FieldPoly sq(9, FieldElement::zero(f));
        for (std::size_t u = 0; u < 5; ++u) {
          for (std::size_t v = 0; v < 5; ++v) sq[u + v] += px.prp[u] * px.prp[v];
        }
        REQUIRE(sq == pcrd(d, x.value));
        REQUIRE(poly_at(d, px.prp, x.value) == d.zero());
        // Polar form of Srp.
        REQUIRE(px.trp == d.trd(x.half));
        REQUIRE(pxy.srp + px.srp + py.srp == px.trp * py.trp + d.trd(d.mul(x.value, y.half)));
      }
    }
  }
  // u in one diagonal slot has Pcrd = (X^2 + X + a) X^6, with a nonzero odd coefficient.
  const Field f = make_gf2k(2);
  const Algebra d_alg = AlgebraDescriptor::split_symp(f);
  const AlgebraDescriptor& d = *d_alg;
  AlgElem x = d.zero();
  x(0, 0)[1] = FieldElement::one(f);
  CHECK_THROWS_AS(prp(d, x), Error);
}

TEST_CASE("Prp on a W1-shaped element") {
  std::mt19937_64 rng(54);
  const Field f = make_gf2k(3);
  const Algebra d_alg = AlgebraDescriptor::split_symp(f);
  const AlgebraDescriptor& d = *d_alg;
  for (int i = 0; i < 20; ++i) {
    Entry x12 = d.entry_zero(), x34 = d.entry_zero();
    for (std::size_t k = 0; k < 4; ++k) {
      x12[k] = random_element(f, rng);
      x34[k] = random_element(f, rng);
    }
    AlgElem half = d.zero();
    half(0, 1) = x12;
    half(2, 3) = x34;
    const HalvedElement x = symmetrize(d, half);
    const FieldElement n12 = q_nrd(QuaternionElement{d.quaternions(), x12});
    const FieldElement n34 = q_nrd(QuaternionElement{d.quaternions(), x34});
    const PfaffianData p = prp(d, x.value);
    // (X^2 + n12)(X^2 + n34).
    const FieldElement z = FieldElement::zero(f);
    CHECK(p.prp == FieldPoly{n12 * n34, z, n12 + n34, z, FieldElement::one(f)});
  }
}

TEST_CASE("Srp form") {
  std::mt19937_64 rng(55);
  for (const char* spec : {"gf2", "gf2k:2", "gf2k:3"}) {
    const Field f = parse_field(spec);
    for (const auto& a : symplectic_descriptors(f)) {
      const AlgebraDescriptor& d = *a;
      const InvolutionSpace s = symmetric_space(d);
      const RawQuadraticForm q = srp_form(d, s);
      CHECK(rank(polar_matrix(q)) == 28);
      for (int i = 0; i < 50; ++i) {
        const Vec c = random_coords(f, 28, rng);
        REQUIRE(q.evaluate(c) == srp(d, s.element(d, c)));
      }
    }
  }
  const Field rf = make_ratfunc(1);
  const FieldElement t = FieldElement::variable(rf);
  const FieldElement one = FieldElement::one(rf);
  const Algebra d_alg = AlgebraDescriptor::index2_symp(make_quaternions(t, t), one, t, t + one);
  const AlgebraDescriptor& d = *d_alg;
  const InvolutionSpace s = symmetric_space(d);
  const RawQuadraticForm q = srp_form(d, s);
  CHECK(rank(polar_matrix(q)) == 28);
  for (int i = 0; i < 10; ++i) {
    const Vec c = random_coords(rf, 28, rng);
    REQUIRE(q.evaluate(c) == srp(d, s.element(d, c)));
  }
}

TEST_CASE("Srd forms") {
  std::mt19937_64 rng(56);
  for (const char* spec : {"gf2", "gf2k:2", "ratfunc:gf2:t"}) {
    const Field f = parse_field(spec);
    const FieldElement one = FieldElement::one(f);
    const FieldElement t = f->is_finite() ? el(f, f->base().order() > 2 ? 2 : 1) : FieldElement::variable(f);
    std::vector<Algebra> algs{AlgebraDescriptor::unitary_exchange(f), AlgebraDescriptor::orthogonal(f, {one, t, one, t + one == FieldElement::zero(f) ? one : t + one})};
    if (f->is_finite()) algs.push_back(AlgebraDescriptor::unitary_etale(f, f->base().order() > 2 ? el(f, 2) : one, {one, t, one, one}));
    for (const auto& a : algs) {
      const AlgebraDescriptor& d = *a;
      const InvolutionSpace s = symmetric_space(d);
      CHECK(srd(d, d.one()).is_zero());
      const RawQuadraticForm q = raw_srd_form(d, s.basis);
      for (int i = 0; i < 30; ++i) {
        const Vec c = random_coords(f, s.dimension(), rng);
        const AlgElem x = s.element(d, c);
        REQUIRE(q.evaluate(c) == srd(d, x));
        if (d.kind() == AlgebraKind::UnitaryExchange) {
          // Srd_E of the E-component: principal minors at s = 1.
          const QuadExtElement e2 = oracle_e2(d, x);
          REQUIRE(srd(d, x) == e2.x0 + e2.x1);
        } else {
          const QuadExtElement e2 = oracle_e2(d, x);
          REQUIRE(e2.x1.is_zero());
          REQUIRE(srd(d, x) == e2.x0);
        }
      }
      if (d.type() == InvolutionType::Orthogonal) {
        // Polar rank 4: the radical has dimension 6.
        CHECK(rank(polar_matrix(q)) == 4);
      } else {
        CHECK(rank(polar_matrix(q)) == 16);
      }
    }
  }
}

TEST_CASE("determinant of orthogonal involutions") {
  std::mt19937_64 rng(57);
  const Field f2 = make_gf2k(1);
  const FieldElement one2 = FieldElement::one(f2);
  const auto c2 = det_orthogonal(*AlgebraDescriptor::orthogonal(f2, {one2, one2, one2, one2}), rng);
  CHECK(c2.witnesses.size() == 3);
  CHECK(c2.representative.is_one());

  const Field rf = make_ratfunc(1);
  const FieldElement t = FieldElement::variable(rf);
  const FieldElement one = FieldElement::one(rf);
  for (const auto& g : std::vector<std::vector<FieldElement>>{{one, one, one, one}, {one, one, one, t}, {t, t + one, one, t}}) {
    const auto c = det_orthogonal(*AlgebraDescriptor::orthogonal(rf, g), rng);
    // det rho is the class of det G.
    CHECK(same_square_class(c.representative, g[0] * g[1] * g[2] * g[3]));
    // Scaling G by t leaves rho unchanged.
    std::vector<FieldElement> tg;
    for (const auto& x : g) tg.push_back(t * x);
    const auto ct = det_orthogonal(*AlgebraDescriptor::orthogonal(rf, tg), rng);
    CHECK(same_square_class(c.representative, ct.representative));
  }
  CHECK_FALSE(same_square_class(one, t));
}
