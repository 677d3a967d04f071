#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>

#include "charform/charform.hpp"

using namespace charform;

namespace {

// Collects the first failed requirement of a criterion.
struct Outcome {
  bool pass = true;
  std::size_t checked = 0;
  std::string first_failure;

  void require(bool ok, const std::string& what) {
    ++checked;
    if (ok || !pass) {
      pass = pass && ok;
      return;
    }
    pass = false;
    first_failure = what;
  }
};

struct Criterion {
  int id;
  std::string title;
  std::function<void(Outcome&)> run;
};

const char* const kFields[] = {"gf2", "gf2k:2", "gf2k:3"};

std::string label(const AlgebraDescriptor& d) { return d.field()->spec() + " " + algebra_kind_name(d.kind()); }

WComponents components(const AlgebraDescriptor& d, std::size_t labeling = 0) {
  const InvolutionSpace s = symmetric_space(d);
  return galois_components(d, s, construct_biquadratic(d, s, labeling));
}

bool all_true(const std::vector<Check>& checks, std::string& bad) {
  for (const auto& c : checks) {
    if (c.result != Decision::True) {
      bad = c.name + " is " + to_string(c.result);
      return false;
    }
  }
  return true;
}

QuadraticForm blocks_of(const QuadraticForm& q) { return {q.field, q.blocks, {}}; }
QuadraticForm diag_of(const QuadraticForm& q) { return {q.field, {}, q.diag}; }

// Number of nonzero zeros of q, by enumerating the whole space.
std::uint64_t count_zeros(const QuadraticForm& q) {
  const auto elems = all_elements(q.field);
  const std::size_t n = q.dimension();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= elems.size();
  Vec v = zero_vec(q.field, n);
  std::uint64_t zeros = 0;
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = elems[c % elems.size()];
      c /= elems.size();
    }
    if (q.evaluate(v).is_zero()) ++zeros;
  }
  return zeros;
}

void dimensions(Outcome& o) {
  const std::array<std::size_t, 4> symp{4, 8, 8, 8}, unit{4, 4, 4, 4}, orth{4, 2, 2, 2};
  for (const char* spec : kFields) {
    const Field f = parse_field(spec);
    for (auto type : {InvolutionType::Symplectic, InvolutionType::Unitary, InvolutionType::Orthogonal}) {
      for (const auto& alg : standard_descriptors(f, type)) {
        const AlgebraDescriptor& d = *alg;
        const std::size_t dim = symmetric_space(d).dimension();
        const std::size_t want = type == InvolutionType::Symplectic ? 28 : type == InvolutionType::Unitary ? 16 : 10;
        o.require(dim == want, label(d) + ": space dim " + std::to_string(dim));
        const auto dims = components(d).dims();
        const auto& expect = type == InvolutionType::Symplectic ? symp : type == InvolutionType::Unitary ? unit : orth;
        o.require(dims == expect, label(d) + ": component dims");
      }
    }
  }
}

void run_suite(Outcome& o, const std::string& suite, const char* spec, std::size_t trials) {
  const VerifyReport r = run_verify(suite, parse_field(spec), 2024, trials);
  for (const auto& p : r.properties) {
    o.require(p.failed == 0 && p.unknown == 0, std::string(spec) + " " + p.name + ": " + p.first_failure);
  }
}

void polarization(Outcome& o) {
  for (const char* spec : kFields) run_suite(o, "symplectic", spec, 500);
}

void polar_rank(Outcome& o) {
  for (const char* spec : kFields) {
    for (const auto& alg : standard_descriptors(parse_field(spec), InvolutionType::Symplectic)) {
      const AlgebraDescriptor& d = *alg;
      const std::size_t r = rank(polar_matrix(srp_form(d, symmetric_space(d))));
      o.require(r == 28, label(d) + ": polar rank " + std::to_string(r));
    }
  }
}

void star_multiplicative(Outcome& o) {
  const Field f = parse_field("gf2k:3");
  for (const auto& alg : standard_descriptors(f, InvolutionType::Symplectic)) {
    const AlgebraDescriptor& d = *alg;
    const WComponents w = components(d);
    std::mt19937_64 rng(derive_seed(4, label(d), 0));
    for (int k = 0; k < 1000; ++k) {
      const HalvedElement x1 = w.parts[1].halved(d, random_coords(f, 8, rng));
      const HalvedElement x2 = w.parts[2].halved(d, random_coords(f, 8, rng));
      const HalvedElement x3 = star(d, w, x1, x2);
      o.require(in_component(d, w, 3, x3.value), label(d) + ": x1 * x2 outside W_3");
      o.require(srp(d, x3.value) == srp(d, x1.value) * srp(d, x2.value), label(d) + ": Srp not multiplicative");
    }
  }
}

void witt_decomposition(Outcome& o) {
  for (const char* spec : kFields) {
    for (const auto& alg : standard_descriptors(parse_field(spec), InvolutionType::Symplectic)) {
      const AlgebraDescriptor& d = *alg;
      const SympPfisterInvariants inv = extract_symplectic_invariants(d, components(d));
      std::string bad;
      o.require(all_true(inv.checks, bad), label(d) + ": " + bad);
      const QuadraticForm total = normalize(srp_form(d, symmetric_space(d))).form;
      const QuadraticForm sum =
          direct_sum(direct_sum(direct_sum(total, block_form(FieldElement::one(d.field()), FieldElement::one(d.field()))),
                                inv.pi3),
                     inv.pi5);
      o.require(sum.dimension() == 70 && sum.is_nonsingular() && arf_invariant(sum) == 0,
                label(d) + ": 70-dimensional sum is not hyperbolic");
      const SympPfisterInvariants other = extract_symplectic_invariants(d, components(d, 1), {11});
      o.require(witt_equivalent_gf2k(other.pi3, inv.pi3) && witt_equivalent_gf2k(other.pi5, inv.pi5),
                label(d) + ": second L changes pi3 or pi5");
    }
  }
}

void index2_example(Outcome& o) {
  const Field f = parse_field("ratfunc:gf2:t");
  const FieldElement one = FieldElement::one(f);
  const FieldElement t = FieldElement::variable(f);
  const Quaternions q = make_quaternions(t, t);
  const FieldElement u1 = one, u2 = t, u3 = t + one;
  const Algebra alg = AlgebraDescriptor::index2_symp(q, u1, u2, u3);
  const AlgebraDescriptor& d = *alg;
  const SympPfisterInvariants inv = extract_symplectic_invariants(d, components(d));
  const QuadraticForm pi3 = bilinear_tensor({one, u1 * u2 * u3}, nrd_form(*q));
  o.require(inv.pi3 == pi3, "pi3 = " + to_string(inv.pi3));
  o.require(inv.pi5 == bilinear_tensor({one, inv.a1, inv.a2, inv.a1 * inv.a2}, pi3), "pi5 is not <1, a1, a2, a1 a2> pi3");
  o.require(slot_class_isometry(inv.pi5, bilinear_tensor({one, u1, u2, u3}, pi3)) == Decision::True,
            "pi5 not matched with <1, u1, u2, u3> pi3");
  for (const auto& c : inv.checks) o.require(c.result != Decision::False, c.name + " is false");
}

void square_central(Outcome& o) {
  IsotropyOptions iso;
  iso.known_pfister = true;
  for (const char* spec : {"gf2", "gf2k:2"}) {
    for (const auto& alg : standard_descriptors(parse_field(spec), InvolutionType::Symplectic)) {
      const AlgebraDescriptor& d = *alg;
      const WComponents w = components(d);
      const SquareCentral sc = find_square_central(d, w);
      o.require(sc.found == Decision::True && sc.x && !d.scalar_value(*sc.x) && d.scalar_value(d.mul(*sc.x, *sc.x)),
                label(d) + ": no square-central witness");
      o.require(is_hyperbolic(extract_symplectic_invariants(d, w).pi5, iso) == Decision::True,
                label(d) + ": pi5 not hyperbolic");
    }
  }
}

void quaternion_triple(Outcome& o) {
  for (const char* spec : kFields) {
    const Algebra alg = AlgebraDescriptor::split_symp(parse_field(spec));
    const AlgebraDescriptor& d = *alg;
    const Pi3Report r = check_pi3_decomposability(d, components(d), Pi3Direction::FromTriple);
    o.require(r.pi3_hyperbolic == Decision::True, label(d) + ": pi3 not decided hyperbolic");
    o.require(r.witness && srp(d, *r.witness).is_zero(), label(d) + ": W_1 witness not isotropic");
    std::string bad;
    o.require(all_true(r.checks, bad), label(d) + ": " + bad);
  }
}

void unitary(Outcome& o) {
  for (const char* spec : {"gf2", "gf2k:2"}) {
    const Field f = parse_field(spec);
    for (const auto& alg : standard_descriptors(f, InvolutionType::Unitary)) {
      const AlgebraDescriptor& d = *alg;
      const Deg4Invariants inv = extract_unitary_invariants(d, components(d));
      std::string bad;
      o.require(all_true(inv.checks, bad), label(d) + ": " + bad);
      o.require(inv.pi4 == bilinear_tensor({FieldElement::one(f), inv.a1, inv.a2, inv.a1 * inv.a2}, inv.pi2),
                label(d) + ": pi4 is not <1, a1, a2, a1 a2> pi2");
    }
  }
}

void orthogonal(Outcome& o) {
  for (const char* spec : {"gf2", "gf2k:2"}) {
    const Field f = parse_field(spec);
    const FieldElement one = FieldElement::one(f);
    std::vector<std::vector<FieldElement>> grams{{one, one, one, one}};
    if (f->base().order() > 2) {
      const FieldElement g = FieldElement::from_int(f, 2);
      grams.push_back({one, g, g + one, g});
    }
    for (const auto& gram : grams) {
      const Algebra alg = AlgebraDescriptor::orthogonal(f, gram);
      const AlgebraDescriptor& d = *alg;
      const WComponents w = components(d);
      const Deg4Invariants inv = extract_orthogonal_invariants(d, w);
      std::string bad;
      o.require(all_true(inv.checks, bad), label(d) + ": " + bad);
      const RawQuadraticForm srd_raw = srd_form_orth(d, w.space);
      const QuadraticForm norm = normalize(srd_raw).form;
      const QuadraticForm plane = block_form(one, one);
      o.require(norm.blocks.size() == 2 && is_hyperbolic(direct_sum(blocks_of(norm), plane)) == Decision::True,
                label(d) + ": nonsingular part is not [0,0] + [1,1]");
      o.require(inv.phi.dimension() == 6 && inv.phi.is_totally_singular(), label(d) + ": phi shape");
      o.require(totally_singular_isometry(diag_of(norm), inv.phi) == Decision::True, label(d) + ": phi vs normal form");
      const auto radical = nullspace(polar_matrix(srd_raw));
      o.require(radical.size() == 6 &&
                    totally_singular_isometry(detail::diagonal_of(restrict_form(srd_raw, radical)), inv.phi) == Decision::True,
                label(d) + ": phi is not the radical restriction");
      o.require(totally_singular_isometry(inv.pi3p, direct_sum(inv.pi1p, inv.phi)) == Decision::True &&
                    totally_singular_isometry(inv.pi3p, bilinear_tensor({one, inv.a1, inv.a2, inv.a1 * inv.a2}, inv.pi1p)) ==
                        Decision::True,
                label(d) + ": pi3' mismatch");
      std::mt19937_64 rng(derive_seed(10, label(d), 0));
      for (int k = 0; k < 500; ++k) {
        const HalvedElement x1{w.parts[1].element(d, random_coords(f, 2, rng)), d.zero()};
        const HalvedElement x2{w.parts[2].element(d, random_coords(f, 2, rng)), d.zero()};
        if (x1.value == d.zero() || x2.value == d.zero()) continue;
        const HalvedElement x3 = star(d, w, x1, x2);
        o.require(srd(d, x3.value) == srd(d, x1.value) * srd(d, x2.value), label(d) + ": Srd not multiplicative");
      }
    }
  }
}

void oracles(Outcome& o) {
  for (const char* spec : kFields) {
    const VerifyReport r = run_verify("symplectic", parse_field(spec), 11, 500);
    for (const auto& p : r.properties) {
      if (p.name.find("Prp") == std::string::npos) continue;
      o.require(p.failed == 0 && p.unknown == 0 && p.passed >= 500, std::string(spec) + " " + p.name);
    }
  }
  for (unsigned k : {1u, 2u}) {
    const Field f = make_gf2k(k);
    std::mt19937_64 rng(derive_seed(11, f->spec(), 0));
    const std::size_t max_dim = k == 1 ? 8 : 6;
    for (int i = 0; i < 40; ++i) {
      QuadraticForm q{f, {}, {}};
      const std::size_t blocks = rng() % (max_dim / 2 + 1);
      const std::size_t diag = rng() % (max_dim - 2 * blocks + 1);
      for (std::size_t b = 0; b < blocks; ++b) q.blocks.push_back({random_element(f, rng), random_element(f, rng)});
      for (std::size_t b = 0; b < diag; ++b) q.diag.push_back(random_element(f, rng));
      if (q.dimension() == 0) continue;
      const std::uint64_t zeros = count_zeros(q);
      o.require((is_isotropic(q) == Decision::True) == (zeros > 0), "isotropy of " + to_string(q));
      if (!q.is_nonsingular()) continue;
      std::uint64_t qm = 1;
      for (std::size_t b = 0; b < blocks; ++b) qm *= f->base().order();
      const std::uint64_t hyperbolic_zeros = qm * qm / f->base().order() + qm - qm / f->base().order() - 1;
      o.require((is_hyperbolic(q) == Decision::True) == (zeros == hyperbolic_zeros), "hyperbolicity of " + to_string(q));
    }
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "dimensions of the symmetric spaces and components", dimensions},
      {2, "polarization identity and Trp = Trd(x')", polarization},
      {3, "polar rank 28", polar_rank},
      {4, "star lands in W_3 and Srp is multiplicative over GF(8)", star_multiplicative},
      {5, "Witt decomposition hyperbolic, independent of L", witt_decomposition},
      {6, "index-2 example over F2(t)", index2_example},
      {7, "square-central witness and hyperbolic pi5", square_central},
      {8, "quaternion triple gives hyperbolic pi3", quaternion_triple},
      {9, "unitary Witt decomposition", unitary},
      {10, "orthogonal pi1', phi, pi3'", orthogonal},
      {11, "Prp oracles and brute-force form decisions", oracles},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.first_failure = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char time[32];
    std::snprintf(time, sizeof time, "%.2f s", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.title << "  (" << o.checked << " checks, " << time
              << ")";
    if (!o.pass) std::cout << "  " << o.first_failure;
    std::cout << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
