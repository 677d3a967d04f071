#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "charform/pfister.hpp"

namespace charform {

/// Pass/fail/unknown counts for one property.
struct PropertyResult {
  std::string suite;
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t unknown = 0;
  std::string first_failure;
};

struct VerifyReport {
  std::string suite;
  std::string field;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<PropertyResult> properties;
  std::vector<std::string> warnings;

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& p : properties) n += p.failed;
    return n;
  }
  std::size_t unknowns() const {
    std::size_t n = 0;
    for (const auto& p : properties) n += p.unknown;
    return n;
  }
  bool passed() const { return failures() == 0; }
};

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"fields", "forms", "quaternions", "symplectic", "unitary", "orthogonal", "all"};
  return names;
}

/// Seed of trial `trial` in suite `suite`: splitmix64 of the run seed mixed with an FNV-1a tag.
inline std::uint64_t derive_seed(std::uint64_t seed, const std::string& suite, std::uint64_t trial) {
  std::uint64_t tag = 0xcbf29ce484222325ULL;
  for (unsigned char ch : suite) tag = (tag ^ ch) * 0x100000001b3ULL;
  std::uint64_t z = seed + tag + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// The descriptors the suites and the acceptance run exercise over `f`.
inline std::vector<Algebra> standard_descriptors(const Field& f, InvolutionType type) {
  const FieldElement one = FieldElement::one(f);
  const bool finite = f->is_finite();
  const FieldElement g = finite ? FieldElement::from_int(f, f->base().order() > 2 ? 2 : 1) : FieldElement::variable(f);
  std::vector<Algebra> out;
  switch (type) {
    case InvolutionType::Symplectic:
      out.push_back(AlgebraDescriptor::split_symp(f));
      if (!finite) {
        out.push_back(AlgebraDescriptor::index2_symp(make_quaternions(g, g), one, g, g + one));
      } else if (f->base().order() > 2) {
        out.push_back(AlgebraDescriptor::index2_symp(make_quaternions(g, g + one), g, g * g, one));
      } else {
        out.push_back(AlgebraDescriptor::index2_symp(make_quaternions(one, one), one, one, one));
      }
      break;
    case InvolutionType::Unitary:
      out.push_back(AlgebraDescriptor::unitary_exchange(f));
      break;
    case InvolutionType::Orthogonal:
      out.push_back(AlgebraDescriptor::orthogonal(f, {one, one, one, one}));
      if (f->base().order() > 2 || !finite) out.push_back(AlgebraDescriptor::orthogonal(f, {one, g, g + one, g * g + g}));
      break;
  }
  return out;
}

namespace detail {

class Tally {
 public:
  Tally(std::string suite, std::vector<PropertyResult>& out) : suite_(std::move(suite)), out_(out) {}

  void record(const std::string& name, Decision d, const std::string& witness = "") {
    PropertyResult& r = row(name);
    switch (d) {
      case Decision::True: ++r.passed; break;
      case Decision::False:
        if (r.failed++ == 0) r.first_failure = witness;
        break;
      case Decision::Unknown: ++r.unknown; break;
    }
  }
  void record(const std::string& name, bool ok, const std::string& witness = "") { record(name, decided(ok), witness); }
  // Runs `body`; an exception counts as a failure of `name`.
  template <class F>
  void guard(const std::string& name, F&& body) {
    try {
      body();
    } catch (const Error& e) {
      record(name, Decision::False, e.what());
    }
  }
  void checks(const std::string& prefix, const std::vector<Check>& cs) {
    for (const auto& c : cs) record(prefix + c.name, c.result, c.witness);
  }

 private:
  PropertyResult& row(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return out_[it->second];
    index_[name] = out_.size();
    out_.push_back({suite_, name, 0, 0, 0, ""});
    return out_.back();
  }

  std::string suite_;
  std::vector<PropertyResult>& out_;
  std::map<std::string, std::size_t> index_;
};

inline void verify_fields(const Field& f, std::uint64_t seed, std::size_t trials, Tally& t) {
  for (std::size_t i = 0; i < trials; ++i) {
    std::mt19937_64 rng(derive_seed(seed, "fields", i));
    const FieldElement a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
    t.record("associativity", (a * b) * c == a * (b * c) && (a + b) + c == a + (b + c));
    t.record("commutativity", a * b == b * a && a + b == b + a);
    t.record("distributivity", a * (b + c) == a * b + a * c);
    t.record("frobenius_sqrt(x^2) = x", frobenius_sqrt(a * a) == std::optional<FieldElement>(a), a.to_string());
    const auto as = solve_artin_schreier(a);
    if (as.solved()) t.record("Artin-Schreier root", *as.root * *as.root + *as.root == a, a.to_string());
    if (f->is_finite()) t.record("absolute_trace(x^2 + x) = 0", absolute_trace(a * a + a) == 0, a.to_string());
  }
  if (f->is_finite() && f->base().degree() <= 4 && trials > 0) {
    std::vector<FieldElement> image;
    for (const auto& x : all_elements(f)) {
      const FieldElement y = x * x + x;
      if (std::find(image.begin(), image.end(), y) == image.end()) image.push_back(y);
    }
    t.record("image of x^2 + x has 2^(k-1) elements", image.size() == f->base().order() / 2);
  }
}

inline QuadraticForm random_nonsingular(const Field& f, std::size_t blocks, std::mt19937_64& rng) {
  QuadraticForm q{f, {}, {}};
  for (std::size_t i = 0; i < blocks; ++i) q.blocks.push_back({random_element(f, rng, 1), random_element(f, rng, 1)});
  return q;
}

inline void verify_forms(const Field& f, std::uint64_t seed, std::size_t trials, Tally& t) {
  for (std::size_t i = 0; i < trials; ++i) {
    std::mt19937_64 rng(derive_seed(seed, "forms", i));
    const std::size_t n = 2 + rng() % 5;
    RawQuadraticForm raw = RawQuadraticForm::zero(f, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = r; c < n; ++c) raw.coeffs(r, c) = random_element(f, rng, 1);
    }
    const Normalization nf = normalize(raw);
    const Vec v = random_coords(f, n, rng);
    t.record("normalize preserves values", raw.evaluate(v) == nf.form.evaluate(mat_vec(nf.to_new, v)));
    if (!f->is_finite()) continue;
    const QuadraticForm q1 = random_nonsingular(f, 1 + rng() % 3, rng);
    const QuadraticForm q2 = random_nonsingular(f, 1 + rng() % 3, rng);
    const FieldElement c = random_nonzero(f, rng);
    t.record("Arf is additive", arf_invariant(direct_sum(q1, q2)) == (arf_invariant(q1) ^ arf_invariant(q2)));
    t.record("Arf is scale invariant", arf_invariant(scale(c, q1)) == arf_invariant(q1));
    const FieldElement a = random_nonzero(f, rng), b = random_nonzero(f, rng);
    const FieldElement one = FieldElement::one(f);
    t.record("<1,a><1,b> q ~ <1,a,b,ab> q",
             witt_equivalent_gf2k(bilinear_tensor({one, a}, bilinear_tensor({one, b}, q1)), bilinear_tensor({one, a, b, a * b}, q1)));
    const QuadraticForm p = quad_pfister(f, {a}, random_element(f, rng));
    IsotropyOptions iso;
    iso.known_pfister = true;
    t.record("Pfister hyperbolic iff Arf 0", is_hyperbolic(p, iso) == decided(arf_invariant(p) == 0));
  }
}

inline void verify_quaternions(const Field& f, std::uint64_t seed, std::size_t trials, Tally& t) {
  for (std::size_t i = 0; i < trials; ++i) {
    std::mt19937_64 rng(derive_seed(seed, "quaternions", i));
    const Quaternions q = make_quaternions(random_element(f, rng, 1), random_nonzero(f, rng, 1));
    auto pick = [&] {
      QuaternionElement x = QuaternionElement::zero(q);
      for (auto& c : x.c) c = random_element(f, rng, 1);
      return x;
    };
    const QuaternionElement x = pick(), y = pick();
    t.record("conj(xy) = conj(y) conj(x)", q_conj(q_mul(x, y)) == q_mul(q_conj(y), q_conj(x)));
    t.record("conj(conj(x)) = x", q_conj(q_conj(x)) == x);
    t.record("nrd(xy) = nrd(x) nrd(y)", q_nrd(q_mul(x, y)) == q_nrd(x) * q_nrd(y));
    t.record("trd(xy) = trd(yx)", q_trd(q_mul(x, y)) == q_trd(q_mul(y, x)));
    const QuadExtRing k = q->splitting_ring();
    const auto m = split_embedding(k, x);
    const auto tr = k.add(m(0, 0), m(1, 1));
    const auto det = k.add(k.mul(m(0, 0), m(1, 1)), k.mul(m(0, 1), m(1, 0)));
    t.record("split embedding keeps trd and nrd", tr == k.embed(q_trd(x)) && det == k.embed(q_nrd(x)));
  }
}

inline HalvedElement sample(const AlgebraDescriptor& d, const InvolutionSpace& s, std::mt19937_64& rng) {
  const Vec c = random_coords(d.field(), s.dimension(), rng);
  return s.has_halves() ? s.halved(d, c) : HalvedElement{s.element(d, c), d.zero()};
}

// Structural checks and the extraction report, once per descriptor.
inline void verify_pipeline(const AlgebraDescriptor& d, std::uint64_t seed, Tally& t) {
  const std::string kind = algebra_kind_name(d.kind());
  const InvolutionSpace s = symmetric_space(d);
  std::optional<WComponents> w;
  t.guard(kind + ": decomposition", [&] {
    w = galois_components(d, s, construct_biquadratic(d, s));
    t.record(kind + ": component dims", w->dims() == expected_component_dims(d));
  });
  if (!w) return;
  ExtractionOptions opts;
  opts.seed = seed;
  const bool finite = d.field()->is_finite();
  if (d.is_symplectic()) {
    t.record(kind + ": Srp nonsingular", rank(polar_matrix(srp_form(d, s))) == s.dimension());
    std::optional<SympPfisterInvariants> inv;
    t.guard(kind + ": extraction", [&] {
      inv = extract_symplectic_invariants(d, *w, opts);
      t.checks(kind + ": ", inv->checks);
    });
    t.guard(kind + ": square-central element", [&] {
      const SquareCentral sc = find_square_central(d, *w, opts);
      t.record(kind + ": square-central element", sc.found);
      if (inv && finite) {
        IsotropyOptions iso;
        iso.known_pfister = true;
        t.record(kind + ": square-central element iff pi5 hyperbolic", sc.found == is_hyperbolic(inv->pi5, iso));
      }
    });
    if (d.kind() == AlgebraKind::SplitSymp) {
      t.guard(kind + ": quaternion triple", [&] {
        t.checks(kind + ": triple: ", check_pi3_decomposability(d, *w, Pi3Direction::FromTriple, opts).checks);
      });
    }
    if (inv && finite) {
      t.guard(kind + ": x in W_1 with x^2 in F^x", [&] {
        t.checks(kind + ": ", check_pi3_decomposability(d, *w, Pi3Direction::ToTriple, opts).checks);
      });
      for (std::size_t lab = 1; lab < projection_labelings().size(); ++lab) {
        t.guard(kind + ": pi3, pi5 independent of L", [&] {
          const auto other = extract_symplectic_invariants(d, galois_components(d, s, construct_biquadratic(d, s, lab)), opts);
          t.record(kind + ": pi3, pi5 independent of L",
                   witt_equivalent_gf2k(other.pi3, inv->pi3) && witt_equivalent_gf2k(other.pi5, inv->pi5));
        });
      }
    }
  } else if (d.type() == InvolutionType::Unitary) {
    t.guard(kind + ": extraction", [&] { t.checks(kind + ": ", extract_unitary_invariants(d, *w, opts).checks); });
  } else {
    t.guard(kind + ": extraction", [&] {
      const Deg4Invariants inv = extract_orthogonal_invariants(d, *w, opts);
      t.checks(kind + ": ", inv.checks);
      t.record(kind + ": pi3' = pi1' + phi", totally_singular_isometry(inv.pi3p, direct_sum(inv.pi1p, inv.phi)));
    });
  }
}

inline void verify_involutions(InvolutionType type, const Field& f, std::uint64_t seed, std::size_t trials, Tally& t) {
  const std::string suite = involution_type_name(type);
  for (const auto& alg : standard_descriptors(f, type)) {
    const AlgebraDescriptor& d = *alg;
    const std::string kind = algebra_kind_name(d.kind());
    verify_pipeline(d, seed, t);
    const InvolutionSpace s = symmetric_space(d);
    std::optional<WComponents> w;
    try {
      w = galois_components(d, s, construct_biquadratic(d, s));
    } catch (const Error&) {
    }
    for (std::size_t i = 0; i < trials; ++i) {
      std::mt19937_64 rng(derive_seed(seed, suite + "/" + kind, i));
      if (d.is_symplectic()) {
        const HalvedElement x = sample(d, s, rng), y = sample(d, s, rng);
        t.guard(kind + ": Prp^2 = Pcrd", [&] {
          const PfaffianData px = prp(d, x.value);
          FieldPoly sq(2 * px.prp.size() - 1, FieldElement::zero(f));
          for (std::size_t u = 0; u < px.prp.size(); ++u) {
            for (std::size_t v = 0; v < px.prp.size(); ++v) sq[u + v] += px.prp[u] * px.prp[v];
          }
          t.record(kind + ": Prp^2 = Pcrd", sq == pcrd(d, x.value));
          t.record(kind + ": Prp(x) = 0", poly_at(d, px.prp, x.value) == d.zero());
          t.record(kind + ": Trp(x) = Trd(x')", px.trp == d.trd(x.half));
          const FieldElement lhs = srp(d, d.add(x.value, y.value)) + px.srp + srp(d, y.value);
          t.record(kind + ": polar form of Srp", lhs == px.trp * trp(d, y) + d.trd(d.mul(x.value, y.half)));
        });
      }
      if (w) {
        const HalvedElement x1 = sample(d, w->parts[1], rng), x2 = sample(d, w->parts[2], rng);
        t.guard(kind + ": star multiplicativity", [&] {
          const HalvedElement x3 = star(d, *w, x1, x2);
          t.record(kind + ": star multiplicativity",
                   second_trace(d, x3.value) == second_trace(d, x1.value) * second_trace(d, x2.value));
        });
        const HalvedElement l = sample(d, w->parts[0], rng), x3 = sample(d, w->parts[3], rng);
        t.record(kind + ": components orthogonal", second_trace_polar(d, x1, l).is_zero() &&
                                                      second_trace_polar(d, x1, x2).is_zero() &&
                                                      second_trace_polar(d, x2, x3).is_zero());
      }
    }
  }
}

}  // namespace detail

/// Runs one suite (or "all") over `f`; deterministic in (seed, trials). trials = 0 runs nothing.
inline VerifyReport run_verify(const std::string& suite, const Field& f, std::uint64_t seed, std::size_t trials) {
  const auto& names = verify_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown suite \"" + suite + "\"");
  }
  VerifyReport r;
  r.suite = suite;
  r.field = f->spec();
  r.seed = seed;
  r.trials = trials;
  if (trials == 0) {
    r.warnings.push_back("trials = 0: nothing was checked");
    return r;
  }
  auto run = [&](const std::string& name) {
    detail::Tally t(name, r.properties);
    if (name == "fields") detail::verify_fields(f, seed, trials, t);
    if (name == "forms") detail::verify_forms(f, seed, trials, t);
    if (name == "quaternions") detail::verify_quaternions(f, seed, trials, t);
    if (name == "symplectic") detail::verify_involutions(InvolutionType::Symplectic, f, seed, trials, t);
    if (name == "unitary") detail::verify_involutions(InvolutionType::Unitary, f, seed, trials, t);
    if (name == "orthogonal") detail::verify_involutions(InvolutionType::Orthogonal, f, seed, trials, t);
  };
  if (suite == "all") {
    for (const auto& name : names) {
      if (name != "all") run(name);
    }
  } else {
    run(suite);
  }
  return r;
}

}  // namespace charform
