// Runs the mlgrid executable and checks exit codes and output files.
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = CLI_WORK_DIR;

// Per-test capture files so the suite can run in parallel.
fs::path capture(const char* stream) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  return kWork / (std::string(info->name()) + "." + stream);
}

int run(const std::string& args) {
  const std::string cmd = std::string(MLGRID_EXE) + " " + args + " >" + capture("stdout").string() + " 2>" +
                          capture("stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write(const std::string& name, const std::string& content) {
  const fs::path p = kWork / name;
  std::ofstream(p) << content;
  return p;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { fs::create_directories(kWork); }
};

}  // namespace

TEST_F(Cli, EvalAbSumAtZeroOrderReturnsInput) {
  const auto p = write("ab0.json", R"({"grid":{"a":0,"n":4},"order":{"class":"ab_sum","constant":0},
    "operator":{"side":"left","family":"ab_sum","variant":"type2"},"normalization":"ab",
    "functions":{"f":[9,1.5,-2,0.25,3]}})");
  ASSERT_EQ(run("eval " + p.string() + " --out " + (kWork / "ab0.csv").string()), 0);
  EXPECT_EQ(slurp(kWork / "ab0.csv"), "offset,t,value\n1,1,1.5\n2,2,-2\n3,3,0.25\n4,4,3\n");
}

TEST_F(Cli, EvalRunningSumFromCsv) {
  write("f.csv", "offset,value\n0,0\n1,1\n2,2\n3,3\n");
  const auto p = write("cum.json", R"({"grid":{"a":0,"n":3},"order":{"class":"sum","values":[1,1,1,1]},
    "operator":{"side":"left","family":"frac_sum"},"functions":{"f":"f.csv"}})");
  ASSERT_EQ(run("eval " + p.string()), 0);
  EXPECT_EQ(slurp(capture("stdout")), "offset,t,value\n1,1,1\n2,2,3\n3,3,6\n");
}

TEST_F(Cli, SchemaErrorsExitTwo) {
  const auto missing = write("noorder.json", R"({"grid":{"a":0,"n":3},
    "operator":{"side":"left","family":"frac_sum"},"functions":{"f":[0,1,2,3]}})");
  EXPECT_EQ(run("eval " + missing.string()), 2);
  EXPECT_NE(slurp(capture("stderr")).find("order"), std::string::npos);
  const auto unknown = write("unknown.json", R"({"grid":{"a":0,"n":3,"m":1},"order":{"class":"sum","constant":1},
    "operator":{"side":"left","family":"frac_sum"},"functions":{"f":[0,1,2,3]}})");
  EXPECT_EQ(run("eval " + unknown.string()), 2);
  EXPECT_NE(slurp(capture("stderr")).find("unknown key"), std::string::npos);
  EXPECT_EQ(run("eval " + (kWork / "absent.json").string()), 2);
  write("bad.json", "{not json");
  EXPECT_EQ(run("eval " + (kWork / "bad.json").string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, DomainErrorsExitThree) {
  const auto p = write("dom.json", R"({"grid":{"a":0,"n":3},"order":{"class":"diff","constant":0.7},
    "operator":{"side":"left","family":"abc_diff"},"functions":{"f":[0,1,2,3]}})");
  EXPECT_EQ(run("eval " + p.string()), 3);
  EXPECT_EQ(run("ml --alpha 0.3 --lambda 1.0 --z-max 3"), 3);
}

TEST_F(Cli, MlTable) {
  ASSERT_EQ(run("ml --alpha 0.4 --lambda 0 --z-max 3"), 0);
  const std::string out = slurp(capture("stdout"));
  EXPECT_EQ(out.substr(0, out.find('\n')), "z,value,terms,method");
  EXPECT_NE(out.find("\n1,1,"), std::string::npos);
  EXPECT_NE(out.find("\n3,1,"), std::string::npos);
  ASSERT_EQ(run("ml --alpha 0.4 --lambda -0.5 --z-max 1"), 0);
  EXPECT_NE(slurp(capture("stdout")).find("1,0.66666666666666"), std::string::npos);
}

TEST_F(Cli, MlNearUnitLambdaHitsTermBudget) {
  const int rc = run("ml --alpha 0.3 --lambda 0.999 --z-max 60");
  EXPECT_TRUE(rc == 0 || rc == 4) << rc;
}

TEST_F(Cli, VerifyPassesAndWritesReports) {
  const fs::path out = kWork / "verify";
  ASSERT_EQ(run("verify all --trials 10 --seed 1 --out " + out.string()), 0);
  const std::string summary = slurp(out / "summary.json");
  EXPECT_NE(summary.find("\"pass\": true"), std::string::npos);
  EXPECT_NE(summary.find("\"trials\": 10"), std::string::npos);
  EXPECT_NE(summary.find("\"max_rel_residual\""), std::string::npos);
  const std::string reports = slurp(out / "reports.csv");
  EXPECT_EQ(std::count(reports.begin(), reports.end(), '\n'), 101);
}

TEST_F(Cli, VerifyUsageErrors) {
  EXPECT_EQ(run("verify all --trials 0"), 2);
  EXPECT_EQ(run("verify Main-9"), 2);
  EXPECT_EQ(run("verify all --replay 5"), 2);
  EXPECT_EQ(run("verify all --n-min 5 --n-max 4"), 2);
}

TEST_F(Cli, InjectedFaultFailsWithReplaySeed) {
  ASSERT_EQ(run("verify Main-1 --trials 5 --seed 2 --inject-fault 1e-6"), 1);
  const std::string err = slurp(capture("stderr"));
  const auto pos = err.find("--replay ");
  ASSERT_NE(pos, std::string::npos) << err;
  const std::string seed = err.substr(pos + 9, err.find(' ', pos + 9) - pos - 9);
  EXPECT_EQ(run("verify Main-1 --replay " + seed + " --inject-fault 1e-6"), 1);
  EXPECT_EQ(run("verify Main-1 --replay " + seed), 0);
}

TEST_F(Cli, SolveConstantBoundary) {
  const auto p = write("const.json", R"({"grid":{"a":0,"n":6},"order":{"class":"diff","constant":0.3},
    "variational":{"lagrangian":{"kind":"quadratic","c1":0.5},"A":3,"B":3}})");
  const fs::path out = kWork / "solve_const";
  ASSERT_EQ(run("solve " + p.string() + " --out " + out.string()), 0);
  std::ifstream in(out / "solution.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "offset,t,value");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_NEAR(std::stod(line.substr(line.rfind(',') + 1)), 3.0, 1e-12) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 6);
  const std::string s = slurp(out / "summary.json");
  EXPECT_NE(s.find("\"converged\": true"), std::string::npos);
  const auto number_after = [&](const std::string& key) {
    const auto pos = s.find("\"" + key + "\": ");
    return pos == std::string::npos ? 1.0 : std::stod(s.substr(pos + key.size() + 4));
  };
  EXPECT_LE(std::abs(number_after("J")), 1e-20);
  EXPECT_LE(number_after("max_abs_residual"), 1e-12);
  const std::string residual = slurp(out / "residual.csv");
  EXPECT_EQ(std::count(residual.begin(), residual.end(), '\n'), 5);
}

TEST_F(Cli, SolveMatchesOracleBothMethods) {
  const auto p = write("oracle.json", R"({"grid":{"a":0,"n":6},"order":{"class":"diff","constant":0.25},
    "variational":{"lagrangian":{"kind":"quadratic","c1":0.5,"c2":0.5},"A":1,"B":0,"variant":"type1"}})");
  for (const char* m : {"linear", "gd"}) {
    const fs::path out = kWork / (std::string("solve_") + m);
    ASSERT_EQ(run("solve " + p.string() + " --method " + m + " --out " + out.string()), 0);
    std::ifstream in(out / "solution.csv");
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_NEAR(std::stod(line.substr(line.rfind(',') + 1)), 0.4600257249923255458115909, 1e-8) << m;
  }
}

TEST_F(Cli, SolveNonConvergenceExitsFour) {
  const auto p = write("slow.json", R"({"grid":{"a":0,"n":8},"order":{"class":"diff","constant":0.3},
    "variational":{"lagrangian":{"kind":"quadratic","c1":0.5,"c2":0.5},"A":1,"B":-1}})");
  const fs::path out = kWork / "solve_slow";
  EXPECT_EQ(run("solve " + p.string() + " --method gd --max-iter 2 --out " + out.string()), 4);
  EXPECT_NE(slurp(out / "summary.json").find("\"converged\": false"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "solution.csv"));
}

TEST_F(Cli, SolveMalformedLagrangianExitsTwo) {
  const auto p = write("badlag.json", R"({"grid":{"a":0,"n":6},"order":{"class":"diff","constant":0.3},
    "variational":{"lagrangian":{"kind":"cubic","c1":0.5},"A":1,"B":0}})");
  EXPECT_EQ(run("solve " + p.string()), 2);
  const auto q = write("badlen.json", R"({"grid":{"a":0,"n":6},"order":{"class":"diff","constant":0.3},
    "variational":{"lagrangian":{"kind":"quadratic","c1":[1,2]},"A":1,"B":0}})");
  EXPECT_EQ(run("solve " + q.string()), 2);
  const auto r = write("novar.json", R"({"grid":{"a":0,"n":6},"order":{"class":"diff","constant":0.3}})");
  EXPECT_EQ(run("solve " + r.string()), 2);
}

TEST_F(Cli, QuietAndLogging) {
  const std::string cmd = "verify SumIBP-1 --trials 2 --out " + (kWork / "quiet").string();
  ASSERT_EQ(run("--quiet " + cmd), 0);
  EXPECT_EQ(slurp(capture("stdout")), "");
  ASSERT_EQ(run(cmd), 0);
  EXPECT_NE(slurp(capture("stdout")).find("PASS"), std::string::npos);
  const std::string env = "MLGRID_LOG=info ";
  const std::string full = env + MLGRID_EXE + " " + cmd + " 2>" + capture("log").string() + " >/dev/null";
  ASSERT_EQ(std::system(full.c_str()), 0);
  EXPECT_NE(slurp(capture("log")).find("wrote"), std::string::npos);
}

TEST_F(Cli, VerifyIsDeterministic) {
  const fs::path a = kWork / "det_a", b = kWork / "det_b";
  ASSERT_EQ(run("verify all --seed 7 --trials 20 --out " + a.string()), 0);
  ASSERT_EQ(run("verify all --seed 7 --trials 20 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a / "reports.csv"), slurp(b / "reports.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
}
