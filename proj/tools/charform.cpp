#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "charform/charform.hpp"

using namespace charform;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct RunConfig {
  std::string input;
  std::string case_name;
  std::string field;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::size_t trials = 100;
  std::size_t budget = 2048;
  bool json = false;
  std::string suite;
};

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed_given) return cfg.seed;
  if (const char* env = std::getenv("CHARFORM_SEED")) {
    try {
      std::size_t used = 0;
      const std::string s = env;
      const auto v = std::stoull(s, &used, 0);
      if (used == s.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw Error(ErrorKind::ParseError, std::string("CHARFORM_SEED is not an integer: ") + env);
  }
  return 1;
}

DescriptorInput load_input(const RunConfig& cfg) {
  const std::optional<std::string> field = cfg.field.empty() ? std::nullopt : std::optional(cfg.field);
  if (cfg.input.empty()) {
    if (cfg.case_name.empty()) throw Error(ErrorKind::InvalidArgument, "give --input or --case");
    if (cfg.field.empty()) throw Error(ErrorKind::InvalidArgument, "--case without --input needs --field");
    const Field f = parse_field(cfg.field);
    InvolutionType type = InvolutionType::Symplectic;
    if (cfg.case_name == "unitary") type = InvolutionType::Unitary;
    if (cfg.case_name == "orthogonal") type = InvolutionType::Orthogonal;
    DescriptorInput in;
    in.algebra = standard_descriptors(f, type).front();
    in.label = algebra_kind_name(in.algebra->kind());
    return in;
  }
  std::ifstream file(cfg.input);
  if (!file) throw Error(ErrorKind::ParseError, "cannot open " + cfg.input);
  Json j;
  try {
    j = Json::parse(file);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, cfg.input + ": " + e.what());
  }
  try {
    DescriptorInput in = parse_descriptor(j, field);
    if (!cfg.case_name.empty() && cfg.case_name != involution_type_name(in.algebra->type())) {
      throw Error(ErrorKind::UnsupportedDescriptor, "--case " + cfg.case_name + " does not match the " +
                                                        involution_type_name(in.algebra->type()) + " descriptor in " + cfg.input);
    }
    return in;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, cfg.input + ": " + e.what());
  }
}

void print_checks(const Json& checks) {
  for (const auto& c : checks) {
    std::cout << "  [" << c["result"].get<std::string>() << "] " << c["name"].get<std::string>();
    const auto w = c["witness"].get<std::string>();
    if (!w.empty()) std::cout << "  (" << w << ")";
    std::cout << "\n";
  }
}

int cmd_describe(const RunConfig& cfg) {
  const Json j = describe_json(load_input(cfg));
  if (cfg.json) {
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << j["kind"].get<std::string>() << " over " << j["field"].get<std::string>() << " ("
            << j["involution"].get<std::string>() << ", degree " << j["degree"] << ")\n";
  std::cout << j["space"].get<std::string>() << " dim " << j["space_dim"];
  if (!j["components"].is_null()) {
    const auto& c = j["components"];
    std::cout << ", components " << c[0] << "/" << c[1] << "/" << c[2] << "/" << c[3];
  }
  std::cout << "\n";
  if (j.contains("components_error")) std::cout << "no decomposition: " << j["components_error"].get<std::string>() << "\n";
  return kOk;
}

int cmd_extract(const RunConfig& cfg) {
  const DescriptorInput in = load_input(cfg);
  ExtractionOptions opts;
  opts.seed = resolve_seed(cfg);
  opts.search_budget = cfg.budget;
  const Json j = extraction_report(in, opts);
  const auto& sum = j["summary"];
  const bool failed = sum["false"].get<std::size_t>() > 0;
  if (cfg.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << j["case"].get<std::string>() << " invariants for " << j["label"].get<std::string>() << " over "
              << j["descriptor"]["field"].get<std::string>() << " (seed " << j["seed"] << ")\n";
    const auto& d = j["dims"]["components"];
    std::cout << "components " << d[0] << "/" << d[1] << "/" << d[2] << "/" << d[3] << "\n";
    for (const char* key : {"a1", "a2", "delta", "pi3", "pi5", "pi2", "pi4", "pi1p", "phi", "pi3p"}) {
      if (!j.contains(key)) continue;
      const Json& v = j[key];
      std::cout << key << " = " << (v.is_string() ? v.get<std::string>() : v["text"].get<std::string>()) << "\n";
    }
    std::cout << "checks:\n";
    print_checks(j["checks"]);
    std::cout << sum["true"] << " true, " << sum["false"] << " false, " << sum["unknown"] << " unknown\n";
  }
  if (sum["unknown"].get<std::size_t>() > 0) {
    std::cerr << "warning: " << sum["unknown"] << " check(s) undecided\n";
  }
  return failed ? kCheckFailed : kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const Field f = parse_field(cfg.field.empty() ? "gf2" : cfg.field);
  const VerifyReport r = run_verify(cfg.suite, f, resolve_seed(cfg), cfg.trials);
  if (cfg.json) {
    std::cout << to_json(r).dump(2) << "\n";
  } else {
    std::cout << "verify " << r.suite << " over " << r.field << ", seed " << r.seed << ", " << r.trials << " trials\n";
    for (const auto& p : r.properties) {
      std::cout << "  " << (p.failed ? "FAIL" : "ok  ") << " " << p.suite << ": " << p.name << "  (" << p.passed << " passed";
      if (p.failed) std::cout << ", " << p.failed << " failed";
      if (p.unknown) std::cout << ", " << p.unknown << " unknown";
      std::cout << ")";
      if (p.failed && !p.first_failure.empty()) std::cout << "  first failure: " << p.first_failure;
      std::cout << "\n";
    }
    std::cout << (r.passed() ? "pass" : "fail") << ": " << r.failures() << " failure(s), " << r.unknowns() << " unknown\n";
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return r.passed() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact second-trace invariants of involutions in characteristic 2"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--field", cfg.field, "Field descriptor, e.g. gf2, gf2k:3, ratfunc:gf2:t");
    sub->add_flag("--json", cfg.json, "Emit JSON");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) {
          cfg.seed = s;
          cfg.seed_given = true;
        },
        "Random seed (default: CHARFORM_SEED, else 1)");
  };

  CLI::App* describe = app.add_subcommand("describe", "Summarize a descriptor and its decomposition");
  describe->add_option("--input", cfg.input, "Descriptor JSON file");
  describe->add_option("--case", cfg.case_name, "Involution type")->check(CLI::IsMember({"symplectic", "unitary", "orthogonal"}));
  add_common(describe);

  CLI::App* extract = app.add_subcommand("extract", "Extract the Pfister invariants and verify them");
  extract->add_option("--input", cfg.input, "Descriptor JSON file");
  extract->add_option("--case", cfg.case_name, "Involution type")->check(CLI::IsMember({"symplectic", "unitary", "orthogonal"}));
  extract->add_option("--budget", cfg.budget, "Witness search budget")->check(CLI::PositiveNumber);
  add_common(extract);
  add_seed(extract);

  CLI::App* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("suite", cfg.suite, "fields, forms, quaternions, symplectic, unitary, orthogonal or all")
      ->required()
      ->check(CLI::IsMember(verify_suites()));
  verify->add_option("--trials", cfg.trials, "Random trials per property");
  add_common(verify);
  add_seed(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*describe) return cmd_describe(cfg);
    if (*extract) return cmd_extract(cfg);
    return cmd_verify(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ParseError:
      case ErrorKind::InvalidArgument:
      case ErrorKind::UnsupportedDescriptor:
      case ErrorKind::UnsupportedField:
      case ErrorKind::InvalidCandidate:
        return kUsage;
      default:
        return kCheckFailed;
    }
  }
}
