#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tarski/cli.hpp"

namespace tarski::cli {
namespace {

struct Run {
  int code;
  std::string out;
};

Run run(int (*cmd)(const JobConfig&, std::ostream&), const JobConfig& c) {
  std::ostringstream os;
  const int code = cmd(c, os);
  return {code, os.str()};
}

// Runs the built executable; returns its exit status.
int shell(const std::string& args, std::string env = "") {
  const std::string cmd = env + " " TARSKI_BINARY " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, CheckCertificate) {
  JobConfig c;
  c.group = "free:3";
  c.s1 = "1,a";
  c.s2 = "1,b,c";
  c.radius = 3;
  const auto r = run(cmd_check, c);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("certificate"), std::string::npos);
}

TEST(Cli, CheckViolator) {
  JobConfig c;
  c.group = "abelian:1";
  c.s1 = "1,a";
  c.s2 = "1,a";
  c.radius = 2;
  const auto r = run(cmd_check, c);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("A1 = {[0], [1]}"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("A2 = {[0], [1]}"), std::string::npos) << r.out;
}

TEST(Cli, BallRadiusZero) {
  JobConfig c;
  c.radius = 0;
  const auto r = run(cmd_ball, c);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("vertices: 1\n"), std::string::npos);
  c.format = Format::Json;
  EXPECT_EQ(json::parse(run(cmd_ball, c).out)["vertices"], 1);
}

TEST(Cli, BallExports) {
  JobConfig c;
  c.radius = 1;
  c.export_kind = "edges";
  std::istringstream is(run(cmd_ball, c).out);
  EXPECT_EQ(read_edge_list(is).vertices.size(), 5u);
  c.export_kind = "json";
  EXPECT_EQ(json::parse(run(cmd_ball, c).out)["edges"].size(), 8u);
  c.export_kind = "dot";
  EXPECT_THROW(run(cmd_ball, c), ParseError);
}

TEST(Cli, ExitCodesOfExecutable) {
  EXPECT_EQ(shell("check --group free:3 --s1 1,a --s2 1,b,c --radius 3"), 0);
  EXPECT_EQ(shell("check --group abelian:1 --s1 1,a --s2 1,a --radius 2"), 1);
  EXPECT_EQ(shell("ball --group free:2 --radius 0"), 0);
  EXPECT_EQ(shell("ball --group free:x"), 2);
  EXPECT_EQ(shell("ball --no-such-flag"), 2);
  EXPECT_EQ(shell("check --s1 1,z"), 2);
  EXPECT_EQ(shell("--help"), 0);
  EXPECT_EQ(shell("ball --group free:3 --radius 6", "TARSKI_VERTEX_BUDGET=100"), 2);
  EXPECT_EQ(shell("ball --group free:3 --radius 6 --budget 50"), 2);
  EXPECT_EQ(shell("free-check --group abelian:2"), 1);
  EXPECT_EQ(shell("free-check --group sl2z --length 6"), 0);
}

TEST(Cli, Violate) {
  JobConfig c;
  c.group = "abelian:1";
  c.s1 = "1,a";
  c.s2 = "1,a";
  c.format = Format::Json;
  const auto j = json::parse(run(cmd_violate, c).out);
  EXPECT_EQ(j["found"], true);
  EXPECT_EQ(j["radius"], 1);
  c.group = "free:3";
  c.s2 = "1,b,c";
  c.max_radius = 3;
  EXPECT_EQ(run(cmd_violate, c).code, 1);
}

TEST(Cli, Decompose) {
  JobConfig c;
  c.radius = 3;
  const auto r = run(cmd_decompose, c);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verification on the full ball: pass"), std::string::npos);
  c.format = Format::Json;
  const auto j = json::parse(run(cmd_decompose, c).out);
  EXPECT_EQ(j["report"]["pass"], true);
  EXPECT_LE(j["nonempty_pieces"].get<int>(), 4);
}

TEST(Cli, ForestAuditIsDeterministic) {
  JobConfig c;
  c.group = "free:3";
  c.radius = 3;
  c.pairs = 10;
  c.samples = 5;
  c.seed = 99;
  c.format = Format::Json;
  const auto a = run(cmd_forest_audit, c), b = run(cmd_forest_audit, c);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto j = json::parse(a.out);
  EXPECT_EQ(j["passed"], 10);
  EXPECT_EQ(j["interior_degrees"]["meets_threshold"], true);
  c.seed = 100;
  EXPECT_NE(run(cmd_forest_audit, c).out, a.out);
  c.group = "free:2";
  EXPECT_THROW(run(cmd_forest_audit, c), PreconditionError);
}

TEST(Cli, FreeCheck) {
  JobConfig c;
  c.group = "sl2z";
  c.format = Format::Json;
  auto j = json::parse(run(cmd_free_check, c).out);
  EXPECT_EQ(j["result"]["free"], true);
  c.group = "abelian:2";
  c.length = 4;
  j = json::parse(run(cmd_free_check, c).out);
  EXPECT_EQ(j["result"]["witness"], "g h g^-1 h^-1");
  c.group = "cyclic:5";
  EXPECT_THROW(run(cmd_free_check, c), PreconditionError);
  c.g = "a^2";
  c.h = "a^3";
  EXPECT_EQ(run(cmd_free_check, c).code, 1);
}

class ReportTest : public ::testing::Test {
 protected:
  std::filesystem::path dir;
  void SetUp() override {
    dir = std::filesystem::temp_directory_path() /
          ("tarski_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
  }
  void TearDown() override { std::filesystem::remove_all(dir); }

  std::string save(const std::string& name, int (*cmd)(const JobConfig&, std::ostream&),
                   JobConfig c) {
    c.format = Format::Json;
    const auto path = (dir / name).string();
    std::ofstream(path) << run(cmd, c).out;
    return path;
  }
};

TEST_F(ReportTest, AggregatesEvidence) {
  JobConfig c;
  c.group = "free:3";
  c.radius = 2;
  JobConfig three = c;
  three.s2 = "1,b,c";
  JobConfig fc = c;
  fc.length = 5;
  JobConfig rep;
  rep.inputs = {save("two.json", cmd_check, c), save("three.json", cmd_check, three),
                save("dec.json", cmd_decompose, c), save("free.json", cmd_free_check, fc)};
  rep.format = Format::Json;
  const auto r = run(cmd_report, rep);
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["report"]["upper"], 4);
  EXPECT_EQ(j["report"]["lower"], 4);
  rep.format = Format::Text;
  EXPECT_NE(run(cmd_report, rep).out.find("upper: 4"), std::string::npos);
}

TEST_F(ReportTest, RejectsBadInputs) {
  JobConfig c;
  JobConfig other = c;
  other.group = "free:3";
  JobConfig rep;
  rep.inputs = {save("a.json", cmd_check, c), save("b.json", cmd_check, other)};
  EXPECT_THROW(run(cmd_report, rep), PreconditionError);
  rep.inputs = {save("ball.json", cmd_ball, c)};
  EXPECT_THROW(run(cmd_report, rep), PreconditionError);
  rep.inputs = {(dir / "missing.json").string()};
  EXPECT_THROW(run(cmd_report, rep), ParseError);
  rep.inputs = {};
  EXPECT_THROW(run(cmd_report, rep), ParseError);
}

}  // namespace
}  // namespace tarski::cli
