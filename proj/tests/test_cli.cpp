#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("psdp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the binary with `args`; stderr goes to err.txt in the temp dir.
  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + PSDP_CLI_PATH + "\" " + args + " > \"" + path("out.txt") +
                            "\" 2> \"" + path("err.txt") + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  Json json(const std::string& name) const { return Json::parse(read(name)); }

  fs::path dir_;
};

TEST_F(Cli, IdentityEndToEnd) {
  ASSERT_EQ(run("gen --kind identity --n 2 --m 3 -o " + path("i.json")), 0);
  ASSERT_EQ(run("solve -i " + path("i.json") + " --epsilon 0.04 -o " + path("c.json")), 0) << read("err.txt");
  ASSERT_EQ(run("verify -i " + path("i.json") + " -c " + path("c.json") + " -o " + path("r.json")), 0);
  const Json report = json("r.json");
  EXPECT_EQ(report["verdict"], "certified");
  EXPECT_LE(report["gap_ratio"].get<double>(), 2.0);
  const Json cert = json("c.json");
  EXPECT_EQ(cert["format"], "psdp-certificate/v1");
  EXPECT_TRUE(cert.contains("trace"));
}

TEST_F(Cli, MissingInputIsParseError) {
  EXPECT_EQ(run("solve -i " + path("missing.json") + " --epsilon 0.1"), 1);
  EXPECT_NE(read("err.txt").find("ParseError"), std::string::npos) << read("err.txt");
}

TEST_F(Cli, InvalidInstanceIsValidationError) {
  std::ofstream(path("bad.json")) << R"({"format":"psdp-instance/v1","kind":"general","n":2,"m":1,
    "C":[[1,0],[0,1]],"A":[[[1,0],[0,1]]],"b":[-1]})";
  EXPECT_EQ(run("solve -i " + path("bad.json")), 1);
  EXPECT_NE(read("err.txt").find("b[0] negative"), std::string::npos) << read("err.txt");
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("solve"), 1);
  EXPECT_EQ(run("gen --kind nonsense"), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, IterationCapIsSolverError) {
  ASSERT_EQ(run("gen --kind identity --n 2 --m 3 -o " + path("i.json")), 0);
  EXPECT_EQ(run("solve -i " + path("i.json") + " --epsilon 0.1 --max-iter 1"), 2);
  EXPECT_NE(read("err.txt").find("MaxIterationsExceeded"), std::string::npos);
}

TEST_F(Cli, GeneralInstanceSolveAndVerify) {
  ASSERT_EQ(run("gen --kind random --n 3 --m 5 --seed 4 -o " + path("g.json")), 0);
  ASSERT_EQ(run("solve -i " + path("g.json") + " --epsilon 0.1 -o " + path("c.json")), 0) << read("err.txt");
  EXPECT_TRUE(json("c.json").contains("pullback"));
  EXPECT_EQ(run("verify -i " + path("g.json") + " -c " + path("c.json")), 0);
  EXPECT_EQ(json("out.txt")["form"], "general");
}

TEST_F(Cli, TransformSolvePullbackVerify) {
  ASSERT_EQ(run("gen --kind diag --n 3 --m 4 --seed 2 -o " + path("g.json")), 0);
  ASSERT_EQ(run("transform -i " + path("g.json") + " --epsilon 0.1 -o " + path("s.json") + " --record " +
                path("rec.json")),
            0);
  EXPECT_EQ(json("s.json")["kind"], "special");
  EXPECT_EQ(json("rec.json")["format"], "psdp-transform/v1");
  ASSERT_EQ(run("solve -i " + path("s.json") + " --epsilon 0.1 --trace none -o " + path("sc.json")), 0);
  EXPECT_FALSE(json("sc.json").contains("trace"));
  ASSERT_EQ(run("pullback -i " + path("g.json") + " -s " + path("sc.json") + " -r " + path("rec.json") + " -o " +
                path("pc.json")),
            0)
      << read("err.txt");
  EXPECT_EQ(run("verify -i " + path("g.json") + " -c " + path("pc.json")), 0);
  EXPECT_EQ(json("out.txt")["verdict"], "certified");
}

TEST_F(Cli, CorruptedCertificateFailsVerification) {
  ASSERT_EQ(run("gen --kind identity --n 2 --m 3 -o " + path("i.json")), 0);
  ASSERT_EQ(run("solve -i " + path("i.json") + " --epsilon 0.1 -o " + path("c.json")), 0);
  Json cert = json("c.json");
  for (auto& row : cert["X_star"])
    for (auto& v : row) v = v.get<double>() * 0.5;
  std::ofstream(path("bad.json")) << cert.dump();
  EXPECT_EQ(run("verify -i " + path("i.json") + " -c " + path("bad.json")), 3);
  EXPECT_EQ(json("out.txt")["verdict"], "feasibility_fail");
}

TEST_F(Cli, MainLemmaDiagnostic) {
  ASSERT_EQ(run("diagnose mainlemma --trials 200 --epsilon 0.1 --seed 1 --mode relaxed -o " + path("d.json")), 0);
  const Json d = json("d.json");
  EXPECT_EQ(d["violations"], 0);
  ASSERT_FALSE(d["min_margin"].is_null());
  EXPECT_GT(d["min_margin"].get<double>(), 0.0);
  ASSERT_EQ(run("diagnose mainlemma --trials 40 --seed 1"), 0);
  EXPECT_EQ(json("out.txt")["reports"].size(), 2u);
}

TEST_F(Cli, OtherDiagnostics) {
  ASSERT_EQ(run("diagnose jordan --trials 30 --seed 2"), 0);
  EXPECT_EQ(json("out.txt")["diagnostic"], "jordan");
  ASSERT_EQ(run("diagnose lemma2x2 --trials 500 --seed 2"), 0);
  EXPECT_EQ(json("out.txt")["violations"], 0);
}

TEST_F(Cli, DeterministicOutputs) {
  ASSERT_EQ(run("gen --kind random --n 4 --m 6 --seed 11 -o " + path("a.json")), 0);
  ASSERT_EQ(run("gen --kind random --n 4 --m 6 --seed 11 -o " + path("b.json")), 0);
  EXPECT_EQ(read("a.json"), read("b.json"));
  ASSERT_EQ(run("solve -i " + path("a.json") + " --epsilon 0.1 -o " + path("c1.json")), 0);
  ASSERT_EQ(run("solve -i " + path("a.json") + " --epsilon 0.1 -o " + path("c2.json")), 0);
  EXPECT_EQ(read("c1.json"), read("c2.json"));
}

TEST_F(Cli, JsonLogLines) {
  ASSERT_EQ(run("--log-level info --log-format json gen --kind identity --n 2 --m 2 -o " + path("i.json")), 0);
  ASSERT_EQ(run("--log-level info --log-format json solve -i " + path("i.json") + " -o " + path("c.json")), 0);
  std::istringstream lines(read("err.txt"));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    EXPECT_TRUE(j.contains("level"));
    ++count;
  }
  EXPECT_GT(count, 0);
}

}  // namespace
