#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "carlitz/cli.hpp"
#include "json.hpp"

using namespace carlitz;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / ("carlitz_test_" + name);
  std::ofstream(p) << body;
  return p.string();
}

/// Runs the real binary; returns exit status and stdout.
std::pair<int, std::string> shell(const std::string& args) {
  std::string cmd = std::string(CARLITZ_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

const char* kInadmissible =
    "field q=2\n"
    "n = 1\n"
    "P 0 : 1\n"
    "Q 1 : 1\n"
    "Q 0 : x^4 + x\n"  // Q = t - [2] in characteristic 2
    "init 0 : 1\n"
    "truncM = 3\n"
    "truncI = 3\n";

}  // namespace

TEST(Cli, Bracket) {
  auto r = run({"bracket", "--q", "2", "--n", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x + x^2\n");
  EXPECT_EQ(run({"bracket", "--q", "2", "--inf"}).out, "x\n");
  EXPECT_EQ(run({"bracket", "--q", "3", "--inf"}).out, "2*x\n");
  EXPECT_EQ(run({"bracket", "--q", "2", "--n", "-1"}).out, "x^(1/2) + x\n");
}

TEST(Cli, FactorialAndPochhammer) {
  EXPECT_EQ(run({"factorial", "--q", "2", "--n", "2"}).out, "x^3 + x^5 + x^6 + x^8\n");
  EXPECT_EQ(run({"factorial", "--q", "2", "--n", "2", "--kind", "L"}).out, "x^2 + x^3 + x^5 + x^6\n");
  EXPECT_EQ(run({"pochhammer", "--q", "2", "--a", "x", "--m", "2"}).out, "x^8\n");
  auto direct = run({"pochhammer", "--q", "3", "--a", "x + 1", "--m", "3", "--mode", "direct"});
  auto rec = run({"pochhammer", "--q", "3", "--a", "x + 1", "--m", "3", "--mode", "recurrent"});
  EXPECT_EQ(direct.out, rec.out);
}

TEST(Cli, OpNormalize) {
  auto r = run({"op-normalize", "--q", "2", "--expr", "d*tau - tau*d"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "(x^(1/2) + x)\n");
  auto s = run({"op-normalize", "--q", "3", "--expr", "delta1*d", "--nvars", "1", "--strategy", "random", "--seed", "4"});
  EXPECT_EQ(s.out, run({"op-normalize", "--q", "3", "--expr", "delta1*d", "--nvars", "1"}).out);
}

TEST(Cli, IdentityCheckPasses) {
  auto r = run({"identity-check", "--id", "5.7", "--seed", "7", "--trials", "50"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "PASS 50/50\n");
  EXPECT_EQ(run({"identity-check", "--q", "3", "--id", "5.4", "--seed", "1", "--trials", "10"}).out, "PASS 10/10\n");
}

TEST(Cli, CauchySolveRoundTripsThroughOpApply) {
  std::string prob = temp_file("ok.txt",
                               "field q=3\nn = 1\nP 1 : 1\nP 0 : -x\nQ 1 : -1\nQ 0 : x^(1/3)\ninit 0 : 1\ntruncM = 4\ntruncI = 4\n");
  auto r = run({"cauchy-solve", prob});
  ASSERT_EQ(r.code, 0) << r.err;
  MultiFunction u = parse_multifunction(r.out);
  EXPECT_EQ(u.trunc_m(), 4);
  std::string fn = temp_file("u.txt", r.out);
  // The residual operator applied to the solution prints a zero function.
  auto a = run({"op-apply", "--q", "3", "--expr", "delta1 - x - (delta1 - x^(1/3))*d", "--function", fn});
  ASSERT_EQ(a.code, 0) << a.err;
  MultiFunction res = parse_multifunction(a.out);
  EXPECT_TRUE(res.is_zero_at_precision());
}

TEST(Cli, InadmissibleProblemIsRefused) {
  std::string prob = temp_file("bad.txt", kInadmissible);
  auto r = run({"cauchy-solve", prob});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("(2)"), std::string::npos);
  auto j = run({"--json", "cauchy-solve", prob});
  EXPECT_EQ(j.code, 1);
  auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["status"], "refused");
  EXPECT_EQ(doc["reason"], "inadmissible");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"bracket", "--q", "6", "--n", "1"}).code, 2);
  EXPECT_EQ(run({"op-normalize", "--expr", "tau +"}).code, 2);
  EXPECT_EQ(run({"identity-check", "--id", "9.9"}).code, 2);
  EXPECT_EQ(run({"hyper-residual", "--q", "2", "--a", "x", "--b", "x^(1/2)", "--form", "gauss"}).code, 2);
}

TEST(Cli, HyperVerbs) {
  EXPECT_EQ(run({"hyper-residual", "--q", "2", "--a", "x", "--a", "x^2", "--b", "x^(1/2)", "--M", "5", "--form", "gauss"}).out,
            "ZERO on m <= 4\n");
  EXPECT_EQ(run({"hyper-residual", "--q", "3", "--alpha", "2", "--beta", "1", "--M", "5", "--form", "thakur"}).code, 0);
  auto r = run({"hyper-eval", "--q", "2", "--a", "x", "--b", "x^(1/2)", "--z", "x^(-3)", "--M", "4"});
  EXPECT_EQ(r.code, 1);
  std::string file = temp_file("h.txt", "field q=2\na = 0\nb = x^(1/2)\nz = x^3\nM = 4\n");
  auto e = run({"hyper-eval", file});
  EXPECT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(e.out.rfind("x^3", 0), 0u);
}

TEST(Cli, DimCount) {
  auto r = run({"--json", "dim-count", "--kind", "gamma", "--nvars", "1", "--numax", "12"});
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["degree"], 3);
  EXPECT_EQ(doc["counts"][12], 455);
}

TEST(Cli, ParseRoundTrip) {
  auto r = run({"parse-roundtrip", "--q", "2", "--expr", "x^(1/2) + x"});
  EXPECT_EQ(r.code, 0);
  auto o = run({"parse-roundtrip", "--q", "2", "--operator", "--nvars", "1", "--expr", "(delta1 - (x^2+x))*d"});
  EXPECT_EQ(o.code, 0) << o.err;
}

TEST(Cli, FieldConfigFromFileAndEnvironment) {
  std::string cfg = temp_file("field.cfg", "p=2 v=1 m=2\n");
  auto r = run({"--field-config", cfg, "bracket", "--n", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "x + x^2\n");
  auto j = run({"--json", "--field-config", cfg, "bracket", "--n", "1"});
  EXPECT_EQ(nlohmann::json::parse(j.out)["field"]["m"], 2);
  ::setenv("CARLITZ_FIELD_CONFIG", temp_file("field3.cfg", "p=3 v=1\n").c_str(), 1);
  EXPECT_EQ(run({"bracket", "--inf"}).out, "2*x\n");
  EXPECT_EQ(run({"bracket", "--q", "2", "--inf"}).out, "x\n");
  ::unsetenv("CARLITZ_FIELD_CONFIG");
}

TEST(Cli, BinaryExitCodesAndDeterminism) {
  auto [c0, out0] = shell("bracket --q 2 --n 1");
  EXPECT_EQ(c0, 0);
  EXPECT_EQ(out0, "x + x^2\n");
  std::string prob = temp_file("bad2.txt", kInadmissible);
  EXPECT_EQ(shell("cauchy-solve " + prob).first, 1);
  EXPECT_EQ(shell("nonsense").first, 2);
  auto a = shell("--json identity-check --id 5.8 --seed 3 --trials 5");
  auto b = shell("--json identity-check --id 5.8 --seed 3 --trials 5");
  EXPECT_EQ(a.first, 0);
  EXPECT_EQ(a.second, b.second);
}
