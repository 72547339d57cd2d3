#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" BFREE_CLI_PATH "' " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

json run_json(const std::string& args) {
  auto r = run(args);
  EXPECT_EQ(r.code, 0) << args;
  return json::parse(r.out);
}

std::string q(const std::string& s) { return "'" + s + "'"; }

const std::string kF46 = q(R"({"type":"explicit","mods":[4,6]})");
const std::string kF23 = q(R"({"type":"explicit","mods":[2,3]})");
const std::string kSquares = q(R"({"type":"squares_of_primes","limit":30})");
const std::string kToeplitz = q(R"({"type":"explicit","mods":[6,20,56]})");

const json& schema() {
  static const json s = [] {
    std::ifstream in(BFREE_SCHEMA_PATH);
    return json::parse(in);
  }();
  return s;
}

// type / required / properties / items / local $ref: enough for the output schema
void validate(const json& v, const json& s, const std::string& path, std::vector<std::string>& errs) {
  if (s.contains("$ref")) {
    const auto ref = s["$ref"].get<std::string>();
    const std::string prefix = "#/$defs/";
    return validate(v, schema()["$defs"][ref.substr(prefix.size())], path, errs);
  }
  if (s.contains("type")) {
    auto ok = [&](const std::string& t) {
      if (t == "object") return v.is_object();
      if (t == "array") return v.is_array();
      if (t == "string") return v.is_string();
      if (t == "integer") return v.is_number_integer();
      if (t == "number") return v.is_number();
      if (t == "boolean") return v.is_boolean();
      if (t == "null") return v.is_null();
      return false;
    };
    bool any = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) any = any || ok(t.get<std::string>());
    } else {
      any = ok(s["type"].get<std::string>());
    }
    if (!any) {
      errs.push_back(path + ": wrong type");
      return;
    }
  }
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& k : s["required"])
        if (!v.contains(k.get<std::string>())) errs.push_back(path + ": missing " + k.get<std::string>());
    if (s.contains("properties"))
      for (const auto& [k, sub] : s["properties"].items())
        if (v.contains(k)) validate(v[k], sub, path + "." + k, errs);
  }
  if (v.is_array() && s.contains("items"))
    for (std::size_t i = 0; i < v.size(); ++i) validate(v[i], s["items"], path + "[" + std::to_string(i) + "]", errs);
}

void expect_valid(const json& v, const std::string& def) {
  ASSERT_TRUE(schema()["$defs"].contains(def)) << def;
  std::vector<std::string> errs;
  validate(v, schema()["$defs"][def], def, errs);
  for (const auto& e : errs) ADD_FAILURE() << e;
}

}  // namespace

TEST(Cli, SieveExample) {
  auto j = run_json("sieve --family " + kF23 + " --len 6 --bits");
  EXPECT_EQ(j["bits"], "100010");
  EXPECT_EQ(j["ones"], 2);
  expect_valid(j, "sieve");
  auto g = run_json("sieve --family " + kF46 + " --len 12 --bits");
  EXPECT_EQ(g["bits"], "111010101110");
}

TEST(Cli, RawOutputRoundTrips) {
  const std::string path = ::testing::TempDir() + "bfree_cli_test.raw";
  auto r = run("sieve --family " + kF46 + " --len 100 --out '" + path + "'");
  ASSERT_EQ(r.code, 0);
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  ASSERT_TRUE(in.good());
  EXPECT_EQ(static_cast<std::size_t>(in.tellg()), 16u + (100u + 7) / 8);
  std::remove(path.c_str());
}

TEST(Cli, DensityAndSchema) {
  auto j = run_json("density --family " + q(R"({"type":"squares_of_primes"})") + " --kgrid 100 --window 10000");
  EXPECT_EQ(j["de_sequence"][0]["value"]["num"], "457");
  EXPECT_EQ(j["de_sequence"][0]["value"]["den"], "1225");
  expect_valid(j, "density");
}

TEST(Cli, AdmissibleExample) {
  auto j = run_json("admissible --family " + kF46 + " --block 110011100110 --ther --search 12 --dominated");
  EXPECT_EQ(j["found"], false);
  EXPECT_EQ(j["definitive"], true);
  EXPECT_EQ(j["ther"]["satisfiable"], false);
  EXPECT_EQ(j["in_Y"], true);
  expect_valid(j, "admissible");
}

TEST(Cli, EntropyExample) {
  auto j = run_json("entropy --family " + kF23 + " --ngrid 6,12,18,24");
  const std::vector<std::string> counts{"13", "73", "337", "1441"};
  for (std::size_t i = 0; i < counts.size(); ++i) EXPECT_EQ(j["estimates"][i]["count"], counts[i]);
  expect_valid(j, "entropy");
}

TEST(Cli, ProximalExample) {
  auto j = run_json("proximal --family " + kSquares + " --zero-k 3");
  EXPECT_EQ(j["zero_blocks"][2]["k"], 3);
  EXPECT_EQ(j["zero_blocks"][2]["crt_solution"], 548);
  EXPECT_EQ(j["zero_blocks"][2]["crt_modulus"], 900);
  expect_valid(j, "proximal");
}

TEST(Cli, ToeplitzAndOthersMatchSchema) {
  auto t = run_json("toeplitz --family " + kToeplitz + " --verify --window 1:2000 --stages 3");
  EXPECT_EQ(t["verify"]["fraction_periodic"], 1.0);
  expect_valid(t, "toeplitz");
  expect_valid(run_json("toeplitz --family " + kToeplitz + " --dyadic 3,5,7"), "toeplitz");
  expect_valid(run_json("taut --family " + kF46 + " --reduce --check --verify-mirsky --window 1000 --blocklen 3"), "taut");
  expect_valid(run_json("sample-mme --family " + kF46 + " --len 50 --seed 3 --bits"), "sample-mme");
  auto a = run_json("abundant --limit 1000 --generators --runs 5 --coprime-k 1 --gap-k 2");
  EXPECT_EQ(a["first_abundant"], 12);
  EXPECT_EQ(a["first_odd_abundant"], 945);
  expect_valid(a, "abundant");
  auto r = run_json("rogers-fuzz --count 200 --seed 5");
  EXPECT_EQ(r["violations"], 0);
  expect_valid(r, "rogers-fuzz");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("sieve --family " + kF46 + " --len 0").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("sieve --family '{\"type\":' --len 5").code, 2);
  EXPECT_EQ(run("sieve --family /nonexistent/family.json --len 5").code, 2);
  // well-formed request the library refuses
  EXPECT_EQ(run("taut --family " + q(R"({"type":"squares_of_primes"})") + " --reduce").code, 1);
}

TEST(Cli, OutputIsDeterministicAndThreadIndependent) {
  const std::string args = "sieve --family " + kSquares + " --len 5000 --bits --gaps 3";
  const auto a = run(args);
  const auto b = run(args);
  const auto c = run(args, "BFREE_THREADS=3");
  const auto d = run("--threads 2 " + args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_EQ(a.out, d.out);
  const std::string s = "sample-mme --family " + kF46 + " --len 300 --seed 11 --bits";
  EXPECT_EQ(run(s).out, run(s, "BFREE_THREADS=2").out);
}

TEST(Cli, FlatFormats) {
  auto r = run("--format csv sieve --family " + kF23 + " --len 6");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ones"), std::string::npos);
  auto p = run("sieve --family " + kF23 + " --len 6 --format plain");
  ASSERT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("ones"), std::string::npos);
}
