#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef NORMALITY_LAB_PATH
#error "NORMALITY_LAB_PATH must point at the normality_lab binary"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NORMALITY_LAB_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, EnumerateSmall) {
  const auto r = run("enumerate --n 2 --no-timing");
  ASSERT_EQ(r.code, 0);
  const auto j = parse(r);
  EXPECT_EQ(j["schema"], "normality-lab/1");
  EXPECT_EQ(j["report"]["hitCount"], "12");
  EXPECT_EQ(j["report"]["totalCount"], "16");
  EXPECT_EQ(j["report"]["probability"], "3/4");
  EXPECT_FALSE(j["report"].contains("wallSeconds"));
}

TEST(Cli, NoTimingIsByteStable) {
  const auto a = run("enumerate --n 3 --no-timing --threads 2");
  const auto b = run("enumerate --n 3 --no-timing --threads 2");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto c = run("sample --event normal --n 3 --samples 2000 --seed 5 --no-timing");
  const auto d = run("sample --event normal --n 3 --samples 2000 --seed 5 --no-timing");
  EXPECT_EQ(c.out, d.out);
}

TEST(Cli, ThreadCountDoesNotChangeReports) {
  const auto a = parse(run("enumerate --n 4 --no-timing --threads 1"));
  const auto b = parse(run("enumerate --n 4 --no-timing --threads 4"));
  const auto c = parse(run("enumerate --n 4 --no-timing --threads 16"));
  EXPECT_EQ(a["report"], b["report"]);
  EXPECT_EQ(a["report"], c["report"]);
  EXPECT_EQ(a["report"]["hitCount"], "2096");
}

TEST(Cli, CsvSweep) {
  const auto r = run("enumerate --n 3 --sweep --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("n,mode,hits,total,log2prob\n", 0), 0U);
  EXPECT_NE(r.out.find("\n3,exhaustive,80,512,"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("enumerate --n 6").code, 2);
  EXPECT_EQ(run("enumerate").code, 1);
  EXPECT_EQ(run("enumerate --n 2 --format xml").code, 1);
  EXPECT_EQ(run("permute --matrix /nonexistent/m.txt").code, 1);
  EXPECT_EQ(run("verify nosuch").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, PermuteFromFile) {
  const std::string path = testing::TempDir() + "cli_matrix.txt";
  {
    std::ofstream f(path);
    f << "+ + + +\n+ + + +\n+ + + +\n+ + + +\n";
  }
  const auto r = run("permute --no-timing --matrix " + path);
  ASSERT_EQ(r.code, 0);
  const auto j = parse(r);
  EXPECT_EQ(j["trace"]["profile"], nlohmann::json({0, 1, 1, 0, 0}));
  EXPECT_EQ(j["trace"]["fit"]["k"], 1);
  EXPECT_EQ(j["trace"]["observationViolations"].size(), 1U);
}

TEST(Cli, PropsCheckAndCensus) {
  const std::string path = testing::TempDir() + "cli_paired.txt";
  {
    std::ofstream f(path);
    f << "1 1\n1 -1\n";
  }
  const auto r = run("props --no-timing --matrix " + path + " --k 1 --reduce");
  ASSERT_EQ(r.code, 0);
  const auto j = parse(r);
  EXPECT_TRUE(j["propertyP"]["holds"].get<bool>());

  const auto c = run("props --m 1 --q 2 --format csv");
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(c.out.rfind("m,q,k,countP,countFk,boundExponent,boundExponentProof\n", 0), 0U);
}

TEST(Cli, OptimizeAndBounds) {
  const auto o = parse(run("optimize --no-timing"));
  EXPECT_NEAR(o["fixedPoint"]["alpha"].get<double>(), 0.302854, 1e-5);
  EXPECT_EQ(o["fixedPoint"]["bindingCase"], 5);
  const auto b = parse(run("bounds --alpha 0 --k 0.5 --t 0.5 --formula g1 --no-timing"));
  EXPECT_DOUBLE_EQ(b["values"]["g1"].get<double>(), -0.25);
}

TEST(Cli, VerifyReportsFailuresWithExitThree) {
  const auto ok = run("verify prop26 --no-timing");
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(parse(ok)["passed"].get<bool>());
  const auto bad = run("verify ab-monotone --no-timing");
  EXPECT_EQ(bad.code, 3);
  const auto j = parse(bad);
  EXPECT_FALSE(j["passed"].get<bool>());
  EXPECT_TRUE(j["suites"][0].contains("witness"));
}
