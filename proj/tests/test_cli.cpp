#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = clockpt::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  return v;
}

// Balanced-tag check: every element closes in order, attributes are quoted.
bool well_formed_xml(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool root_seen = false;
  while ((i = doc.find('<', i)) != std::string::npos) {
    const std::size_t end = doc.find('>', i);
    if (end == std::string::npos) return false;
    std::string tag = doc.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    std::size_t quotes = 0;
    for (char c : tag) quotes += c == '"';
    if (quotes % 2) return false;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    const std::string name = tag.substr(0, tag.find_first_of(" /"));
    if (stack.empty()) {
      if (root_seen) return false;
      root_seen = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  return root_seen && stack.empty();
}

}  // namespace

TEST(CliMatrix, QFourRow) {
  const auto r = run({"matrix", "--q", "4", "--lambda1", "0.5", "--lambda2", "0.333333"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l[0], "index,lambda,r");
  EXPECT_NEAR(std::stod(fields(l[1])[2]), (1 + 1 + 0.333333) / 4, 1e-15);
  EXPECT_NEAR(std::stod(fields(l[2])[2]), (1 - 0.333333) / 4, 1e-15);
  EXPECT_NEAR(std::stod(fields(l[3])[2]), (1 - 1 + 0.333333) / 4, 1e-15);
  EXPECT_EQ(fields(l[5])[0], "feasible");
  EXPECT_EQ(fields(l[5])[1], "true");
}

TEST(CliMatrix, PottsThetaSix) {
  const auto r = run({"matrix", "--q", "5", "--potts", "--theta", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  for (int j = 1; j <= 4; ++j) EXPECT_NEAR(std::stod(fields(l[static_cast<std::size_t>(j + 1)])[1]), 0.5, 1e-15);
}

TEST(CliMatrix, InfeasibleRow) {
  const auto r = run({"matrix", "--q", "4", "--lambda1", "0.2", "--lambda2", "0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("feasible,false,r1 >= r2"), std::string::npos);
  const auto strict = run({"matrix", "--q", "4", "--lambda1", "0.2", "--lambda2", "0.5", "--strict"});
  EXPECT_EQ(strict.code, 1);
}

TEST(CliMatrix, UsageErrors) {
  EXPECT_EQ(run({"matrix", "--q", "4"}).code, 2);
  EXPECT_EQ(run({"matrix", "--q", "2", "--lambda1", "0.5"}).code, 2);
  EXPECT_EQ(run({"matrix", "--q", "4", "--lambda1", "0.5", "--lambda2", "0.4", "--potts", "--theta", "3"}).code, 2);
  EXPECT_EQ(run({"matrix", "--q", "4", "--lambda1", "abc", "--lambda2", "0.4"}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(CliProbe, Verdicts) {
  const auto hot = run({"probe", "--q", "4", "--lambda1", "0.55", "--lambda2", "0.3", "--u", "0.01", "--levels", "400"});
  ASSERT_EQ(hot.code, 0) << hot.err;
  const auto l = lines(hot.out);
  EXPECT_EQ(l.front(), "level,distance");
  EXPECT_EQ(l.size(), 402u);
  EXPECT_EQ(l.back(), "verdict,BOUNDED_AWAY,levels,400,u,0.01");

  const auto cold = run({"probe", "--q", "4", "--lambda1", "0.45", "--lambda2", "0.3", "--u", "0.01"});
  EXPECT_EQ(lines(cold.out).back().rfind("verdict,CONVERGES_TO_UNIFORM", 0), 0u);

  const auto q5 = run({"probe", "--q", "5", "--lambda1", "0.5", "--lambda2", "0.45", "--u", "1"});
  EXPECT_EQ(lines(q5.out).back().rfind("verdict,BOUNDED_AWAY", 0), 0u);
}

TEST(CliProbe, BadFlags) {
  EXPECT_EQ(run({"probe", "--q", "4", "--lambda1", "0.5", "--lambda2", "0.3", "--u", "0"}).code, 2);
  EXPECT_EQ(run({"probe", "--q", "4", "--lambda1", "0.5", "--lambda2", "0.3", "--levels", "-3"}).code, 2);
}

TEST(CliSolve, QFourClosedForm) {
  const auto r = run({"solve", "--q", "4", "--lambda1", "0.5", "--lambda2", "0.4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "alpha1,alpha2,residual");
  EXPECT_EQ(fields(l[1])[0], "0");
  EXPECT_NEAR(std::stod(fields(l[2])[0]), -0.349927106, 1e-8);
  EXPECT_NEAR(std::stod(fields(l[3])[0]), 0.349927106, 1e-8);
}

TEST(CliSolve, QFiveBelowThreshold) {
  const auto r = run({"solve", "--q", "5", "--lambda1", "0.5", "--lambda2", "0.3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).size(), 2u);
}

// Row count of the trivial solution plus every verified nontrivial one.
TEST(CliSolve, QFivePottsPointRowCount) {
  const auto r = run({"solve", "--q", "5", "--lambda1", "0.5", "--lambda2", "0.5"});
  ASSERT_EQ(r.code, 0);
  const auto set = clockpt::q5_solutions_at_critical(0.5);
  EXPECT_EQ(lines(r.out).size(), 1u + set.solutions.size());
}

TEST(CliSolve, ScanHasLambdaColumn) {
  const auto r = run({"solve", "--q", "5", "--scan", "0.44:0.46:0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  EXPECT_EQ(l[0], "lambda2,alpha1,alpha2,residual");
  EXPECT_EQ(fields(l[1]).size(), 4u);
  EXPECT_EQ(run({"solve", "--scan", "0.5:0.4:0.01"}).code, 2);
  EXPECT_EQ(run({"solve", "--q", "6", "--lambda2", "0.4"}).code, 2);
}

TEST(CliClassify, Structures) {
  const auto two = run({"classify", "--lambda2", "0.45"});
  ASSERT_EQ(two.code, 0);
  EXPECT_EQ(lines(two.out)[0], "lambda2,a,b,c,d,e,Delta,P,D,Delta0,structure,n_real,roots");
  EXPECT_EQ(fields(lines(two.out)[1])[10], "TWO_DISTINCT");
  EXPECT_EQ(fields(lines(run({"classify", "--lambda2", "0.0"}).out)[1])[10], "DEGENERATE_ZERO");
}

TEST(CliClassify, ScanBracketsCriticalValues) {
  const auto r = run({"classify", "--scan", "0.3:0.55:0.001"});
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  std::vector<double> changes;
  for (std::size_t i = 2; i < l.size(); ++i) {
    const double d0 = std::stod(fields(l[i - 1])[6]), d1 = std::stod(fields(l[i])[6]);
    if ((d0 > 0) != (d1 > 0)) changes.push_back(0.5 * (std::stod(fields(l[i - 1])[0]) + std::stod(fields(l[i])[0])));
  }
  ASSERT_GE(changes.size(), 2u);
  EXPECT_NEAR(changes[0], 0.370748, 1e-3);
  bool second = false;
  for (double c : changes) second |= std::abs(c - 0.494119) < 1e-3;
  EXPECT_TRUE(second);
}

TEST(CliSweep, SingleRowAndCsvSchema) {
  const auto r = run({"sweep", "--q", "4", "--res", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], "lambda1,lambda2,feasible,regime,n_nontrivial");
  EXPECT_EQ(run({"sweep", "--q", "4", "--res", "0"}).code, 2);
  EXPECT_EQ(run({"sweep", "--q", "3", "--res", "4"}).code, 2);
}

TEST(CliSweep, SvgIsWellFormed) {
  const auto r = run({"sweep", "--q", "4", "--res", "20", "--svg", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("<?xml", 0), 0u);
  EXPECT_NE(r.out.find("<polyline"), std::string::npos);
  EXPECT_NE(r.out.find("width=\"800\" height=\"600\""), std::string::npos);
  EXPECT_EQ(r.out.find("href"), std::string::npos);
  EXPECT_TRUE(well_formed_xml(r.out));
}

TEST(CliSweep, FilesAndDeterminism) {
  const std::string csv = testing::TempDir() + "clockpt_sweep.csv";
  const std::string svg = testing::TempDir() + "clockpt_sweep.svg";
  const auto a = run({"sweep", "--q", "5", "--res", "8", "--output", csv, "--svg", svg, "--threads", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  std::ifstream in(csv);
  const std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto b = run({"sweep", "--q", "5", "--res", "8", "--threads", "1"});
  EXPECT_EQ(file, b.out);
  EXPECT_EQ(file.find('\r'), std::string::npos);
  std::ifstream svg_in(svg);
  const std::string doc((std::istreambuf_iterator<char>(svg_in)), std::istreambuf_iterator<char>());
  EXPECT_TRUE(well_formed_xml(doc));
  std::remove(csv.c_str());
  std::remove(svg.c_str());
}

TEST(CliPotts, Thresholds) {
  const auto r = run({"potts", "--q", "5", "--degree", "2"});
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  EXPECT_EQ(l[0], "q,d,theta_cr,theta_rpt,lambda1");
  EXPECT_EQ(l[1], "5,2,6,6,0.5");
}

TEST(CliPotts, JacobianProfileDecreases) {
  const auto r = run({"potts", "--q", "5", "--degree", "2", "--jacobian", "0.45:0.4999:0.005"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  EXPECT_EQ(l[0], "lambda,alpha1,alpha2,det");
  ASSERT_GE(l.size(), 3u);
  double prev = 1e9;
  for (std::size_t i = 1; i < l.size(); ++i) {
    const double det = std::abs(std::stod(fields(l[i])[3]));
    EXPECT_LT(det, prev) << l[i];
    prev = det;
  }
}

TEST(CliPotts, BoundaryLaws) {
  const auto r = run({"potts", "--q", "5", "--degree", "2", "--bl", "0.45"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "branch,a,alpha1,alpha2,residual,sign_convention,mode_convention,verified");
  for (std::size_t i = 1; i < 3; ++i) {
    const auto f = fields(l[i]);
    EXPECT_LT(std::stod(f[4]), 1e-9);
    EXPECT_EQ(f.back(), "true");
  }
}

TEST(CliHelp, EverySubcommandDocumentsItsFlags) {
  const auto top = run({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const char* sub : {"matrix", "probe", "solve", "classify", "sweep", "potts"}) {
    EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
    const auto h = run({sub, "--help"});
    EXPECT_EQ(h.code, 0) << sub;
    EXPECT_NE(h.out.find("--"), std::string::npos) << sub;
  }
  EXPECT_NE(run({"probe", "--help"}).out.find("1e-12"), std::string::npos);
  EXPECT_NE(run({"solve", "--help"}).out.find("1e-9"), std::string::npos);
}

TEST(CliOutput, SeventeenDigits) {
  EXPECT_EQ(clockpt::cli::fmt(0.1), "0.10000000000000001");
  EXPECT_EQ(clockpt::cli::fmt(0.5), "0.5");
}
