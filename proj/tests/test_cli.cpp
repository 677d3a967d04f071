#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "charform/charform.hpp"

using namespace charform;

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI through the shell; stderr is merged into the output when `merge` is set.
Run cli(const std::string& args, bool merge = false, const std::string& env = "") {
  const std::string cmd = env + " " + CHARFORM_CLI + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(CHARFORM_DATA) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(CHARFORM_TMP) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("describe prints the space and component dimensions", "[cli]") {
  const Run split = cli("describe --case symplectic --field gf2");
  CHECK(split.code == 0);
  CHECK(split.out.find("Symd dim 28, components 4/8/8/8") != std::string::npos);
  const Run orth = cli("describe --input " + data("orthogonal_gf2.json"));
  CHECK(orth.code == 0);
  CHECK(orth.out.find("Sym dim 10") != std::string::npos);
  const Run unit = cli("describe --input " + data("unitary_exchange_gf2.json") + " --json");
  CHECK(Json::parse(unit.out)["space_dim"] == 16);
}

TEST_CASE("malformed input exits with status 2 and a diagnostic", "[cli]") {
  const Run bad = cli("describe --input " + write_temp("bad.json", "{\"kind\": "), true);
  CHECK(bad.code == 2);
  CHECK(bad.out.find("parse error") != std::string::npos);
  CHECK(cli("describe --input " + write_temp("bad_kind.json", R"({"kind": "cubic", "field": "gf2"})")).code == 2);
  CHECK(cli("describe --input " + write_temp("bad_elem.json", R"({"kind": "orthogonal", "field": "gf2", "gram": [1, "s", 1, 1]})")).code == 2);
  CHECK(cli("extract --input " + data("orthogonal_gf2.json") + " --case unitary").code == 2);
  CHECK(cli("verify nosuch").code == 2);
  CHECK(cli("frobnicate").code == 2);
}

TEST_CASE("index-2 report carries pi3 = <1, t(t+1)> n_Q literally", "[cli]") {
  const Run r = cli("extract --input " + data("index2_symp_ratfunc.json") + " --json");
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  const Field f = parse_field("ratfunc:gf2:t");
  const FieldElement t = FieldElement::variable(f);
  const FieldElement one = FieldElement::one(f);
  const QuadraticForm nq = quad_pfister(f, {t}, t);
  const QuadraticForm want = bilinear_tensor({one, t * (t + one)}, nq);
  REQUIRE(j["pi3"]["blocks"].size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(parse_element(f, j["pi3"]["blocks"][i][0]) == want.blocks[i].a);
    CHECK(parse_element(f, j["pi3"]["blocks"][i][1]) == want.blocks[i].b);
  }
  for (const auto& c : j["checks"]) CHECK(c["result"] != "false");
}

TEST_CASE("finite-field extractions decide every check", "[cli]") {
  for (const char* file : {"split_symp_gf8.json", "index2_symp_gf4.json", "unitary_exchange_gf2.json", "orthogonal_gf2.json",
                           "orthogonal_gf4.json"}) {
    const Run r = cli("extract --input " + data(file) + " --json");
    INFO(file);
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    for (const auto& c : j["checks"]) {
      INFO(c["name"].get<std::string>());
      CHECK(c["result"] == "true");
    }
    if (j["case"] == "unitary") {
      bool witt = false;
      for (const auto& c : j["checks"]) witt |= c["name"] == "Witt decomposition" && c["result"] == "true";
      CHECK(witt);
    }
  }
}

TEST_CASE("reports are byte-identical for the same input and seed", "[cli]") {
  const std::string args = "extract --input " + data("index2_symp_gf4.json") + " --json --seed 42";
  const Run a = cli(args), b = cli(args);
  CHECK(a.out == b.out);
  CHECK(Json::parse(a.out)["seed"] == 42);
  CHECK(Json::parse(cli("extract --input " + data("index2_symp_gf4.json") + " --json").out)["seed"] == 1);
  CHECK(cli("extract --input " + data("index2_symp_gf4.json") + " --json", false, "CHARFORM_SEED=42").out == a.out);
  CHECK(cli("extract --input " + data("index2_symp_gf4.json"), false, "CHARFORM_SEED=x").code == 2);
}

TEST_CASE("user-supplied L is accepted or rejected with status 2", "[cli]") {
  const std::string ok = R"({"kind": "split_symp", "field": "gf2",
    "l": {"s1": [[0,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,1]], "s2": [[0,0,0,0],[0,0,0,0],[0,0,1,0],[0,0,0,1]]}})";
  const Run r = cli("extract --input " + write_temp("user_l.json", ok) + " --json");
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["summary"]["false"] == 0);
  const std::string same = R"({"kind": "split_symp", "field": "gf2",
    "l": {"s1": [[0,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,1]], "s2": [[0,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,1]]}})";
  const Run bad = cli("extract --input " + write_temp("user_l_bad.json", same), true);
  CHECK(bad.code == 2);
  CHECK(bad.out.find("InvalidCandidate") != std::string::npos);
}

TEST_CASE("verify runs pass and report unknowns", "[cli]") {
  const Run all = cli("verify all --field gf2k:2 --seed 7 --trials 500");
  CHECK(all.code == 0);
  CHECK(all.out.find("pass: 0 failure(s)") != std::string::npos);
  const Run rat = cli("verify symplectic --field ratfunc:gf2:t --trials 10 --json");
  CHECK(rat.code == 0);
  const Json j = Json::parse(rat.out);
  CHECK(j["result"] == "pass");
  CHECK(j["unknowns"].get<std::size_t>() > 0);
  const Run empty = cli("verify forms --trials 0", true);
  CHECK(empty.code == 0);
  CHECK(empty.out.find("warning") != std::string::npos);
}
