#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "charform/pfister.hpp"
#include "charform/verify.hpp"
#include "json.hpp"

namespace charform {

using Json = nlohmann::ordered_json;

namespace detail {

// Recursive descent over  sum := product ('+' product)*,  product := power (('*' | '/') power)*,
// power := atom ('^' digits)?,  atom := literal | variable | '(' sum ')'. Juxtaposition such as
// "0x3t" is not accepted; write "0x3*t".
class ElementParser {
 public:
  ElementParser(const Field& f, std::string text) : f_(f), s_(std::move(text)) {}

  FieldElement parse() {
    FieldElement x = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return x;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::ParseError, "field element '" + s_ + "' at offset " + std::to_string(pos_) + ": " + why);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  FieldElement sum() {
    FieldElement x = product();
    while (eat('+') || eat('-')) x += product();
    return x;
  }

  FieldElement product() {
    FieldElement x = power();
    for (;;) {
      if (eat('*')) {
        x = x * power();
      } else if (eat('/')) {
        const FieldElement y = power();
        if (y.is_zero()) fail("division by zero");
        x = x / y;
      } else {
        return x;
      }
    }
  }

  FieldElement power() {
    const FieldElement base = atom();
    if (!eat('^')) return base;
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent expected");
    unsigned long e = std::stoul(s_.substr(start, pos_ - start));
    FieldElement r = FieldElement::one(f_);
    for (unsigned long i = 0; i < e; ++i) r = r * base;
    return r;
  }

  FieldElement atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      FieldElement x = sum();
      if (!eat(')')) fail("')' expected");
      return x;
    }
    const std::size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string lit = s_.substr(start, pos_ - start);
      std::uint32_t bits = 0;
      try {
        std::size_t used = 0;
        bits = static_cast<std::uint32_t>(std::stoul(lit, &used, 0));
        if (used != lit.size()) fail("bad literal " + lit);
      } catch (const std::logic_error&) {
        fail("bad literal " + lit);
      }
      if (bits >= f_->base().order()) fail("literal " + lit + " is outside GF(2^" + std::to_string(f_->base().degree()) + ")");
      return FieldElement::from_int(f_, bits);
    }
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name.empty()) fail("operand expected");
    if (f_->is_finite() || name != f_->variable()) fail("unknown symbol " + name);
    return FieldElement::variable(f_);
  }

  const Field& f_;
  std::string s_;
  std::size_t pos_ = 0;
};

inline std::string hex(std::uint32_t bits) {
  std::ostringstream os;
  os << "0x" << std::hex << bits;
  return os.str();
}

}  // namespace detail

/// Accepts an integer (bit pattern), an expression string such as "t^2 + 0x3*t" or "1/(t+1)",
/// or {"num": [...], "den": [...]} with coefficients lowest degree first.
inline FieldElement parse_element(const Field& f, const Json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0 || static_cast<std::uint64_t>(v) >= f->base().order()) {
      throw Error(ErrorKind::ParseError, "integer literal " + j.dump() + " is not in the base field");
    }
    return FieldElement::from_int(f, static_cast<std::uint32_t>(v));
  }
  if (j.is_string()) return detail::ElementParser(f, j.get<std::string>()).parse();
  if (j.is_object() && j.contains("num")) {
    if (f->is_finite()) throw Error(ErrorKind::ParseError, "fraction given for a finite field");
    const Field base = make_gf2k(f->base().degree(), f->base().modulus());
    auto coeffs = [&](const Json& c) {
      Poly p;
      if (!c.is_array() || c.empty()) throw Error(ErrorKind::ParseError, "coefficient list expected");
      for (const auto& x : c) p.push_back(parse_element(base, x).bits());
      return p;
    };
    const Poly den = j.contains("den") ? coeffs(j["den"]) : Poly{1};
    try {
      return FieldElement::from_fraction(f, coeffs(j["num"]), den);
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, std::string("bad fraction: ") + e.what());
    }
  }
  throw Error(ErrorKind::ParseError, "cannot read a field element from " + j.dump());
}

/// "0x.." over GF(2^k); {"num": [...], "den": [...], "text": ...} over GF(2^k)(t). The text is
/// informational and ignored on input.
inline Json to_json(const FieldElement& x) {
  if (x.field()->is_finite()) return detail::hex(x.bits());
  Json num = Json::array(), den = Json::array();
  for (auto c : x.num()) num.push_back(detail::hex(c));
  for (auto c : x.den()) den.push_back(detail::hex(c));
  return Json{{"num", num}, {"den", den}, {"text", x.to_string()}};
}

inline Json to_json(const QuadraticForm& q) {
  Json blocks = Json::array(), diag = Json::array();
  for (const auto& b : q.blocks) blocks.push_back(Json::array({to_json(b.a), to_json(b.b)}));
  for (const auto& c : q.diag) diag.push_back(to_json(c));
  return Json{{"dim", q.dimension()}, {"blocks", blocks}, {"diag", diag}, {"text", to_string(q)}};
}

inline Json to_json(const std::vector<Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back(Json{{"name", c.name}, {"result", to_string(c.result)}, {"witness", c.witness}});
  return out;
}

/// Parsed input file: the algebra plus optional generators of L.
struct DescriptorInput {
  Algebra algebra;
  std::optional<std::pair<AlgElem, AlgElem>> l;
  std::string label;
};

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing key \"") + key + "\"");
  return j.at(key);
}

inline std::vector<FieldElement> parse_list(const Field& f, const Json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw Error(ErrorKind::ParseError, std::string("\"") + what + "\" must be a list of " + std::to_string(n) + " elements");
  }
  std::vector<FieldElement> out;
  for (const auto& x : j) out.push_back(parse_element(f, x));
  return out;
}

// A 4 x 4 matrix; an entry is one element (a scalar) or a list of coeff_dim coordinates.
inline AlgElem parse_matrix(const AlgebraDescriptor& d, const Json& j) {
  const std::size_t n = AlgebraDescriptor::kSize;
  if (!j.is_array() || j.size() != n) throw Error(ErrorKind::ParseError, "matrix must have 4 rows");
  AlgElem x = d.zero();
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) throw Error(ErrorKind::ParseError, "matrix rows must have 4 entries");
    for (std::size_t c = 0; c < n; ++c) {
      const Json& e = j[r][c];
      if (e.is_array()) {
        if (e.size() != d.coeff_dim()) {
          throw Error(ErrorKind::ParseError, "entry needs " + std::to_string(d.coeff_dim()) + " coordinates");
        }
        for (std::size_t k = 0; k < e.size(); ++k) x(r, c)[k] = parse_element(d.field(), e[k]);
      } else {
        x(r, c) = d.entry_scalar(parse_element(d.field(), e));
      }
    }
  }
  return x;
}

}  // namespace detail

/// {"kind": ..., "field": ..., plus "quaternion": {"a", "b"} and "h": [u1, u2, u3] for
/// index2_symp, "gram": [g1..g4] for orthogonal and unitary_etale, "c" for unitary_etale,
/// optionally "l": {"s1": M, "s2": M} and "label"}.
inline DescriptorInput parse_descriptor(const Json& j, const std::optional<std::string>& field_override = std::nullopt) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "descriptor must be a JSON object");
  const std::string kind = detail::require(j, "kind").get<std::string>();
  const Field f = parse_field(field_override ? *field_override : detail::require(j, "field").get<std::string>());
  DescriptorInput in;
  in.label = j.value("label", kind);
  try {
    if (kind == "split_symp") {
      in.algebra = AlgebraDescriptor::split_symp(f);
    } else if (kind == "index2_symp") {
      const Json& q = detail::require(j, "quaternion");
      const auto h = detail::parse_list(f, detail::require(j, "h"), 3, "h");
      in.algebra = AlgebraDescriptor::index2_symp(
          make_quaternions(parse_element(f, detail::require(q, "a")), parse_element(f, detail::require(q, "b"))), h[0], h[1],
          h[2]);
    } else if (kind == "unitary_exchange") {
      in.algebra = AlgebraDescriptor::unitary_exchange(f);
    } else if (kind == "unitary_etale") {
      in.algebra = AlgebraDescriptor::unitary_etale(f, parse_element(f, detail::require(j, "c")),
                                                    detail::parse_list(f, detail::require(j, "gram"), 4, "gram"));
    } else if (kind == "orthogonal") {
      in.algebra = AlgebraDescriptor::orthogonal(f, detail::parse_list(f, detail::require(j, "gram"), 4, "gram"));
    } else {
      throw Error(ErrorKind::UnsupportedDescriptor, "unknown kind \"" + kind + "\"");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::UnsupportedDescriptor) throw;
    throw Error(ErrorKind::ParseError, std::string("invalid ") + kind + " descriptor: " + e.what());
  }
  if (j.contains("l")) {
    const Json& l = j["l"];
    in.l = std::pair{detail::parse_matrix(*in.algebra, detail::require(l, "s1")),
                     detail::parse_matrix(*in.algebra, detail::require(l, "s2"))};
  }
  return in;
}

inline Json descriptor_json(const AlgebraDescriptor& d) {
  Json j{{"kind", algebra_kind_name(d.kind())}, {"field", d.field()->spec()}};
  if (d.kind() == AlgebraKind::Index2Symp) {
    j["quaternion"] = Json{{"a", to_json(d.quaternions()->a())}, {"b", to_json(d.quaternions()->b())}};
    j["h"] = Json::array({to_json(d.gram()[1]), to_json(d.gram()[2]), to_json(d.gram()[3])});
  }
  if (d.kind() == AlgebraKind::UnitaryEtale) j["c"] = to_json(d.center_c());
  if (d.kind() == AlgebraKind::UnitaryEtale || d.kind() == AlgebraKind::Orthogonal) {
    Json g = Json::array();
    for (const auto& x : d.gram()) g.push_back(to_json(x));
    j["gram"] = g;
  }
  return j;
}

inline Json summary_json(const std::vector<Check>& checks) {
  std::size_t t = 0, f = 0, u = 0;
  for (const auto& c : checks) {
    if (c.result == Decision::True) ++t;
    if (c.result == Decision::False) ++f;
    if (c.result == Decision::Unknown) ++u;
  }
  return Json{{"true", t}, {"false", f}, {"unknown", u}};
}

/// "Symd" for symplectic involutions, "Sym" otherwise.
inline const char* space_name(const AlgebraDescriptor& d) { return d.is_symplectic() ? "Symd" : "Sym"; }

inline BiquadraticEtale input_biquadratic(const DescriptorInput& in, const InvolutionSpace& s) {
  const AlgebraDescriptor& d = *in.algebra;
  if (in.l) return construct_biquadratic(d, s, in.l->first, in.l->second);
  return construct_biquadratic(d, s);
}

/// Kind, field, space dimension and, when L can be built, the component dimensions.
inline Json describe_json(const DescriptorInput& in) {
  const AlgebraDescriptor& d = *in.algebra;
  const InvolutionSpace s = symmetric_space(d);
  Json j{{"label", in.label},
         {"kind", algebra_kind_name(d.kind())},
         {"involution", involution_type_name(d.type())},
         {"field", d.field()->spec()},
         {"degree", d.degree()},
         {"space", space_name(d)},
         {"space_dim", s.dimension()}};
  try {
    const WComponents w = galois_components(d, s, input_biquadratic(in, s));
    const auto dims = w.dims();
    j["components"] = Json::array({dims[0], dims[1], dims[2], dims[3]});
  } catch (const Error& e) {
    j["components"] = nullptr;
    j["components_error"] = e.what();
  }
  return j;
}

/// Full invariants report for the case of `in`. Checks of the square-central search and the pi3
/// decomposability run are included with a prefix.
inline Json extraction_report(const DescriptorInput& in, const ExtractionOptions& opts) {
  const AlgebraDescriptor& d = *in.algebra;
  const InvolutionSpace s = symmetric_space(d);
  const WComponents w = galois_components(d, s, input_biquadratic(in, s));
  const auto dims = w.dims();
  Json j{{"case", involution_type_name(d.type())},
         {"label", in.label},
         {"descriptor", descriptor_json(d)},
         {"seed", opts.seed},
         {"dims", Json{{"space", s.dimension()}, {"components", Json::array({dims[0], dims[1], dims[2], dims[3]})}}}};
  std::vector<Check> checks;
  auto append = [&](const std::string& prefix, const std::vector<Check>& cs) {
    for (const auto& c : cs) checks.push_back({prefix + c.name, c.result, c.witness});
  };
  if (d.is_symplectic()) {
    const SympPfisterInvariants inv = extract_symplectic_invariants(d, w, opts);
    j["a1"] = to_json(inv.a1);
    j["a2"] = to_json(inv.a2);
    j["pi3"] = to_json(inv.pi3);
    j["pi5"] = to_json(inv.pi5);
    j["witnesses"] = Json{{"x1", to_string(d, inv.x1.value)}, {"x2", to_string(d, inv.x2.value)}};
    append("", inv.checks);
    const SquareCentral sc = find_square_central(d, w, opts);
    j["square_central"] = Json{{"found", to_string(sc.found)}, {"x", sc.x ? Json(to_string(d, *sc.x)) : Json(nullptr)}};
    append("square central: ", sc.checks);
    if (d.kind() == AlgebraKind::SplitSymp || d.kind() == AlgebraKind::Index2Symp) {
      const Pi3Report to = check_pi3_decomposability(d, w, Pi3Direction::ToTriple, opts);
      Json pd{{"pi3_hyperbolic", to_string(to.pi3_hyperbolic)},
              {"witness", to.witness ? Json(to_string(d, *to.witness)) : Json(nullptr)}};
      append("pi3 hyperbolic: ", to.checks);
      if (d.kind() == AlgebraKind::SplitSymp) {
        const Pi3Report from = check_pi3_decomposability(d, w, Pi3Direction::FromTriple, opts);
        pd["from_triple"] = to_string(from.pi3_hyperbolic);
        append("quaternion triple: ", from.checks);
      }
      j["pi3_decomposability"] = pd;
    }
  } else {
    const Deg4Invariants inv = d.type() == InvolutionType::Unitary ? extract_unitary_invariants(d, w, opts)
                                                                    : extract_orthogonal_invariants(d, w, opts);
    j["a1"] = to_json(inv.a1);
    j["a2"] = to_json(inv.a2);
    if (inv.type == InvolutionType::Unitary) {
      j["pi2"] = to_json(inv.pi2);
      j["pi4"] = to_json(inv.pi4);
    } else {
      j["delta"] = to_json(*inv.delta);
      j["pi1p"] = to_json(inv.pi1p);
      j["phi"] = to_json(inv.phi);
      j["pi3p"] = to_json(inv.pi3p);
      j["findings"] = inv.findings;
    }
    Json ws = Json::array();
    for (const auto& x : inv.witnesses) ws.push_back(to_string(d, x.value));
    j["witnesses"] = ws;
    append("", inv.checks);
  }
  j["checks"] = to_json(checks);
  j["summary"] = summary_json(checks);
  return j;
}

inline Json to_json(const VerifyReport& r) {
  Json props = Json::array();
  for (const auto& p : r.properties) {
    props.push_back(Json{{"suite", p.suite},
                         {"name", p.name},
                         {"passed", p.passed},
                         {"failed", p.failed},
                         {"unknown", p.unknown},
                         {"first_failure", p.first_failure}});
  }
  return Json{{"suite", r.suite},     {"field", r.field},
              {"seed", r.seed},       {"trials", r.trials},
              {"result", r.passed() ? "pass" : "fail"},
              {"failures", r.failures()}, {"unknowns", r.unknowns()},
              {"warnings", r.warnings}, {"properties", props}};
}

}  // namespace charform
